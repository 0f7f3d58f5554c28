// Acceptance runner: one line per criterion, nonzero exit on any failure.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lolab/acceptance.hpp"
#include "lolab/canonical_json.hpp"
#include "lolab/cli.hpp"
#include "lolab/config.hpp"

using namespace lolab;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs `verify-all` through the command line with stderr silenced.
int verify_all(std::uint64_t seed, unsigned workers, const std::filesystem::path& out) {
  std::vector<std::string> args = {"lolab",     "verify-all", "--seed", std::to_string(seed), "--workers",
                                   std::to_string(workers), "--format", "json", "--out", out.string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::cerr.flush();
  const int saved = dup(2);
  const int null = open("/dev/null", O_WRONLY);
  dup2(null, 2);
  close(null);
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data());
  std::cerr.flush();
  dup2(saved, 2);
  close(saved);
  return code;
}

CriterionResult reproducibility(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "lolab_acceptance_w1a.json";
  const auto b = dir / "lolab_acceptance_w1b.json";
  const auto c = dir / "lolab_acceptance_w3.json";
  const int ca = verify_all(seed, 1, a);
  const int cb = verify_all(seed, 1, b);
  const int cc = verify_all(seed, 3, c);
  const std::string ta = slurp(a);
  const std::string tb = slurp(b);
  const std::string tc = slurp(c);

  CriterionResult r;
  r.id = 10;
  r.title = criterion_title(10);
  r.details = {{"exitCodes", Json::array({ca, cb, cc})},
               {"bytes", json_int(ta.size())},
               {"repeatIdentical", ta == tb},
               {"workersIdentical", ta == tc},
               {"sha256", sha256_hex(ta)}};
  r.pass = !ta.empty() && ta == tb && ta == tc && ca == 0 && cb == 0 && cc == 0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& p : {a, b, c}) std::filesystem::remove(p);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  SuiteOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

  bool all = true;
  for (const auto& r : run_suite(options)) {
    std::cout << criterion_line(r) << std::endl;
    all = all && r.pass && (r.limitSeconds <= 0 || r.seconds <= r.limitSeconds);
  }
  const CriterionResult repro = reproducibility(options.seed);
  std::cout << criterion_line(repro) << std::endl;
  all = all && repro.pass;
  std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return all ? 0 : 1;
}

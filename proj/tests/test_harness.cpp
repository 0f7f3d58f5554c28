#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lolab/canonical_json.hpp"
#include "lolab/cli.hpp"
#include "lolab/config.hpp"
#include "lolab/errors.hpp"
#include "lolab/vector_io.hpp"

using namespace lolab;

namespace {

std::vector<ZpVector> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_vectors(in);
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "lolab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lolab_test_" + name);
}

}  // namespace

TEST_CASE("vector files", "[io]") {
  REQUIRE(parse("").empty());
  REQUIRE(parse("\n\n").empty());

  const auto vs = parse("p=7; 1 2 3\n\np=11; 0 10\n");
  REQUIRE(vs.size() == 2);
  REQUIRE(vs[0].modulus().value() == 7);
  REQUIRE(vs[0].size() == 3);
  REQUIRE(vs[0][2] == 3);
  REQUIRE(vs[1].support() == 1);
  REQUIRE(format_vector(vs[0]) == "p=7; 1 2 3");

  try {
    parse("p=7; 1 2\np=7; 1 x 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
  }
  REQUIRE_THROWS_AS(parse("1 2 3\n"), ParseError);
  REQUIRE_THROWS_AS(parse("p=8; 1 2\n"), ParseError);
  REQUIRE_THROWS_AS(parse("p=7; 1 9\n"), RangeError);

  const auto path = scratch("vectors.txt");
  save_vectors(path.string(), vs);
  const auto back = load_vectors(path.string());
  REQUIRE(back.size() == 2);
  REQUIRE(back[0] == vs[0]);
  REQUIRE(back[1] == vs[1]);
  std::filesystem::remove(path);
}

TEST_CASE("canonical json", "[io]") {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({json_int(BigInt("123456789012345678901234567890")), json_rational(Rational(3, 4))});
  const std::string text = canonical_dump(j);
  REQUIRE(text.find("\"a\"") < text.find("\"b\""));
  REQUIRE(text.find("123456789012345678901234567890") != std::string::npos);
  REQUIRE(text.back() == '\n');
  REQUIRE(parse_rational("3/4") == Rational(3, 4));
  REQUIRE(parse_rational("-2") == -2);
  REQUIRE_THROWS_AS(parse_rational("x/4"), ParseError);
}

TEST_CASE("profile documents", "[config]") {
  for (const auto& prof : {ConstantsProfile::paper(), ConstantsProfile::desk()}) {
    REQUIRE(profile_from_json(profile_to_json(prof)) == prof);
  }
  Json j = {{"base", "desk"}, {"maxAttempts", 5}, {"tCoeff", "1/64"}};
  const ConstantsProfile c = profile_from_json(j);
  REQUIRE(c.maxAttempts == 5);
  REQUIRE(c.tCoeff == Rational(1, 64));
  REQUIRE(c.mCoeff == ConstantsProfile::desk().mCoeff);
  REQUIRE_THROWS_AS(profile_from_json(Json{{"bogus", 1}}), ParseError);
  REQUIRE_THROWS_AS(profile_from_json(Json{{"base", "other"}}), ParseError);
  REQUIRE_THROWS_AS(resolve_profile("nope"), PreconditionViolated);
  REQUIRE(resolve_profile("desk") == ConstantsProfile::desk());
}

TEST_CASE("digests and records", "[config]") {
  REQUIRE(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  REQUIRE(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  REQUIRE(record_timestamp() == "1700000000");
  const Json a = make_record("rho", Json{{"seed", 1}}, "in", Json::array(), Json::object(), true);
  const Json b = make_record("rho", Json{{"seed", 1}}, "in", Json::array(), Json::object(), true);
  REQUIRE(canonical_dump(a) == canonical_dump(b));
  REQUIRE(a["inputsDigest"] == sha256_hex("in"));
  unsetenv("SOURCE_DATE_EPOCH");
  REQUIRE(record_timestamp() == "unset");
}

TEST_CASE("command line", "[cli]") {
  REQUIRE(run({"frobnicate"}) == 2);
  REQUIRE(run({"singularity", "--n", "3"}) == 2);
  REQUIRE(run({"rho", "--format", "xml"}) == 2);

  const auto out = scratch("exact.txt");
  REQUIRE(run({"singularity", "--exact", "--n", "2", "--out", out.string()}) == 0);
  REQUIRE(slurp(out) == "1/2\n");

  const auto one = scratch("mc1.json");
  const auto three = scratch("mc3.json");
  REQUIRE(run({"singularity", "--mc", "--n", "5", "--trials", "2000", "--format", "json", "--workers", "1",
               "--out", one.string()}) == 0);
  REQUIRE(run({"singularity", "--mc", "--n", "5", "--trials", "2000", "--format", "json", "--workers", "3",
               "--out", three.string()}) == 0);
  REQUIRE(slurp(one) == slurp(three));

  const auto vec = scratch("in.txt");
  {
    std::ofstream f(vec);
    f << "p=7; 1 2 3\np=7; 0 0 0\n";
  }
  const auto csv = scratch("rho.csv");
  REQUIRE(run({"rho", "--vectors", vec.string(), "--format", "csv", "--out", csv.string()}) == 0);
  const std::string table = slurp(csv);
  REQUIRE(table.rfind("index,p,n,support,atom,rho,rho_half\n", 0) == 0);
  REQUIRE(table.find("\n1,7,3,0,0,1,1\n") != std::string::npos);

  {
    std::ofstream f(vec);
    f << "p=7; 1 2 x\n";
  }
  REQUIRE(run({"rho", "--vectors", vec.string()}) == 2);

  for (const auto& p : {out, one, three, vec, csv}) std::filesystem::remove(p);
}

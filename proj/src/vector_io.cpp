#include "lolab/vector_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lolab/errors.hpp"

namespace lolab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_u64(const std::string& tok, std::uint64_t& out) {
  const char* first = tok.data();
  const char* last = first + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<ZpVector> parse_vectors(std::istream& in) {
  std::vector<ZpVector> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto semi = line.find(';');
    if (line.rfind("p=", 0) != 0 || semi == std::string::npos) {
      throw ParseError(line_no, "expected 'p=<prime>; entries'");
    }
    std::uint64_t pv = 0;
    if (!parse_u64(trim(line.substr(2, semi - 2)), pv)) throw ParseError(line_no, "bad modulus");
    if (pv <= 3 || !is_prime_u64(pv)) throw ParseError(line_no, "modulus must be a prime greater than 3");
    const PrimeModulus p(pv);
    std::istringstream rest(line.substr(semi + 1));
    std::vector<Residue> e;
    std::string tok;
    while (rest >> tok) {
      if (!tok.empty() && tok[0] == '-') {
        throw RangeError("line " + std::to_string(line_no) + ": entry " + tok + " is negative");
      }
      std::uint64_t x = 0;
      if (!parse_u64(tok, x)) throw ParseError(line_no, "bad entry '" + tok + "'");
      if (x >= pv) {
        throw RangeError("line " + std::to_string(line_no) + ": entry " + tok + " is not below p = " +
                         std::to_string(pv));
      }
      e.push_back(x);
    }
    out.emplace_back(p, std::move(e));
  }
  return out;
}

std::vector<ZpVector> load_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionViolated("cannot open vector file '" + path + "'");
  return parse_vectors(in);
}

std::string format_vector(const ZpVector& v) {
  std::string s = "p=" + std::to_string(v.modulus().value()) + ";";
  for (Residue r : v.entries()) s += " " + std::to_string(r);
  return s;
}

void save_vectors(const std::string& path, const std::vector<ZpVector>& vs) {
  std::ofstream out(path);
  if (!out) throw PreconditionViolated("cannot write '" + path + "'");
  for (const auto& v : vs) out << format_vector(v) << "\n";
}

}  // namespace lolab

#pragma once

#include "slrh/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace slrh::test {

inline const char* kIntervalClauses =
    "clause 0 <= x, x <= 2 || !P(x) \\/ Q(x).\n"
    "clause x <= 1 || P(x).\n"
    "clause x > 1, P(x) -> false.\n";

inline Problem interval_problem(const std::string& conjecture = "") {
  return parse_problem(std::string(kIntervalClauses) + conjecture);
}

inline const char* kPhi1 = "conjecture forall x, y. (0 <= x, x <= 1, 0 <= y, y <= 1 || !Q(x) \\/ Q(y)).";
inline const char* kPhi2 = "conjecture forall x, y. (1 < x, x <= 2, 1 < y, y <= 2 || !Q(x) \\/ Q(y)).";
inline const char* kPhi3 = "conjecture forall x. (0 <= x, x <= 1 || Q(x)).";
inline const char* kPhi4 = "conjecture forall x. (0 <= x, x <= 2 || Q(x)).";

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::filesystem::path corpus_dir() { return SLRH_CORPUS_DIR; }

inline std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

inline Rational q(long long n, long long d = 1) { return make_rational(n, d); }

inline Term var(const std::string& n) { return Term::variable(n); }
inline Term num(long long n) { return Term::number(Rational(n)); }

/// Interval strings of a partition, e.g. "(-inf,0)".
inline std::vector<std::string> interval_strings(const std::vector<Interval>& p) {
  std::vector<std::string> out;
  for (const Interval& i : p) out.push_back(to_string(i));
  return out;
}

}  // namespace slrh::test

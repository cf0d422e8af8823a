#pragma once

// Shared arithmetic and error types for the spectral multiplicity lab.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sml {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Contract violations (bad arguments, malformed structures).
struct structural_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A verifier refused to run: the construction does not satisfy the
// hypotheses of the requested statement.  Distinct from a numeric failure.
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A size/stage guard tripped before the computation was attempted.
struct guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string rat_str(const Rat& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  if (boost::multiprecision::denominator(r) != 1)
    s += "/" + boost::multiprecision::denominator(r).str();
  return s;
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw structural_error("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw structural_error("cannot parse rational: " + s);
  }
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Euclidean gcd on int64 (used for small combinatorial quantities where
// pulling in big-int machinery would be noise).
inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b) { auto t = a % b; a = b; b = t; }
  return a < 0 ? -a : a;
}

}  // namespace sml

#pragma once

// Exact arithmetic in Q(ω), ω = exp(2πi/M), for small M.
//
// Values are kept as rational coefficient vectors over the spanning set
// {1, ω, …, ω^{M-1}} (the group algebra Q[x]/(x^M - 1) evaluated at ω).
// Equality and zero-testing reduce modulo the M-th cyclotomic polynomial,
// which is the exact kernel of that evaluation.  Twisted correlations and
// orbit averages land here whenever the fiber exponent is small; callers
// fall back to floating accumulation beyond cyclo_exact_limit.

#include "sml/base.hpp"

#include <complex>
#include <numbers>
#include <vector>

namespace sml {

inline constexpr int cyclo_exact_limit = 12;

namespace detail {

// Coefficients of Phi_M, lowest degree first.  Computed by dividing x^M - 1
// by the product of the proper-divisor cyclotomics; memoized.
inline const std::vector<Int>& cyclotomic_poly(int M) {
  static std::vector<std::vector<Int>> cache(1);  // index 0 unused
  if (M < 1) throw structural_error("cyclotomic_poly: M must be positive");
  if ((int)cache.size() > M && !cache[M].empty()) return cache[M];
  if ((int)cache.size() <= M) cache.resize(M + 1);
  // x^M - 1
  std::vector<Int> num(M + 1, 0);
  num[0] = -1; num[M] = 1;
  for (int d = 1; d < M; ++d) {
    if (M % d != 0) continue;
    const auto& phi = cyclotomic_poly(d);
    // exact long division num /= phi (monic divisor)
    std::vector<Int> quot(num.size() - phi.size() + 1, 0);
    for (int i = (int)quot.size() - 1; i >= 0; --i) {
      Int c = num[i + phi.size() - 1];
      quot[i] = c;
      if (c == 0) continue;
      for (size_t j = 0; j < phi.size(); ++j) num[i + j] -= c * phi[j];
    }
    num = std::move(quot);
  }
  cache[M] = std::move(num);
  return cache[M];
}

}  // namespace detail

class CycloSum {
 public:
  CycloSum() : m_(1), c_(1, Rat(0)) {}
  explicit CycloSum(int M) : m_(M), c_(M, Rat(0)) {
    if (M < 1) throw structural_error("CycloSum: order must be >= 1");
  }

  static CycloSum rational(int M, const Rat& r) {
    CycloSum s(M);
    s.c_[0] = r;
    return s;
  }
  // w * ω^t
  static CycloSum root(int M, long t, const Rat& w = Rat(1)) {
    CycloSum s(M);
    long j = t % M; if (j < 0) j += M;
    s.c_[(size_t)j] = w;
    return s;
  }

  int order() const { return m_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  void add_root(long t, const Rat& w) {
    long j = t % m_; if (j < 0) j += m_;
    c_[(size_t)j] += w;
  }

  CycloSum& operator+=(const CycloSum& o) {
    align(o.m_);
    CycloSum t = o; t.align(m_);
    for (int j = 0; j < m_; ++j) c_[j] += t.c_[j];
    return *this;
  }
  CycloSum& operator-=(const CycloSum& o) {
    align(o.m_);
    CycloSum t = o; t.align(m_);
    for (int j = 0; j < m_; ++j) c_[j] -= t.c_[j];
    return *this;
  }
  friend CycloSum operator+(CycloSum a, const CycloSum& b) { a += b; return a; }
  friend CycloSum operator-(CycloSum a, const CycloSum& b) { a -= b; return a; }

  CycloSum& operator*=(const Rat& r) {
    for (auto& x : c_) x *= r;
    return *this;
  }
  friend CycloSum operator*(CycloSum a, const Rat& r) { a *= r; return a; }

  friend CycloSum operator*(const CycloSum& a, const CycloSum& b) {
    CycloSum x = a, y = b;
    x.align(b.m_); y.align(x.m_);
    CycloSum out(x.m_);
    for (int i = 0; i < x.m_; ++i) {
      if (x.c_[i] == 0) continue;
      for (int j = 0; j < x.m_; ++j) {
        if (y.c_[j] == 0) continue;
        out.c_[(i + j) % x.m_] += x.c_[i] * y.c_[j];
      }
    }
    return out;
  }

  CycloSum conj() const {
    CycloSum out(m_);
    for (int j = 0; j < m_; ++j) out.c_[(m_ - j) % m_] = c_[j];
    return out;
  }

  // Remainder of the coefficient polynomial mod Phi_M: the canonical
  // representative.  Zero iff the value is zero in C.
  std::vector<Rat> reduced() const {
    const auto& phi = detail::cyclotomic_poly(m_);
    std::vector<Rat> r = c_;
    for (int i = (int)r.size() - 1; i >= (int)phi.size() - 1; --i) {
      Rat lead = r[i];
      if (lead == 0) continue;
      for (size_t j = 0; j < phi.size(); ++j)
        r[i - (phi.size() - 1) + j] -= lead * Rat(phi[j]);
    }
    r.resize(phi.size() - 1);
    return r;
  }

  bool is_zero() const {
    for (const auto& x : reduced())
      if (x != 0) return false;
    return true;
  }
  friend bool operator==(const CycloSum& a, const CycloSum& b) {
    return (a - b).is_zero();
  }

  // True (with the value) when the sum is a plain rational.
  bool rational_value(Rat* out = nullptr) const {
    auto r = reduced();
    for (size_t j = 1; j < r.size(); ++j)
      if (r[j] != 0) return false;
    if (out) *out = r.empty() ? Rat(0) : r[0];
    return true;
  }

  std::complex<double> approx() const {
    std::complex<double> z(0, 0);
    for (int j = 0; j < m_; ++j) {
      if (c_[j] == 0) continue;
      double th = 2.0 * std::numbers::pi * j / m_;
      z += rat_double(c_[j]) * std::complex<double>(std::cos(th), std::sin(th));
    }
    return z;
  }

 private:
  // Rebase both operands to lcm order so mixed-exponent sums stay exact.
  void align(int other) {
    if (other == m_) return;
    long g = gcd64(m_, other);
    long l = (long)m_ / g * other;
    if (l == m_) return;
    CycloSum wide((int)l);
    long stride = l / m_;
    for (int j = 0; j < m_; ++j) wide.c_[(size_t)(j * stride)] = c_[j];
    *this = std::move(wide);
  }

  int m_;
  std::vector<Rat> c_;
};

}  // namespace sml

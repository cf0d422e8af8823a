#pragma once

// Multiplicity-set arithmetic: the diamond product E <> F = E u F u E*F,
// scaling, semigroup closures with tail descriptors, double-coset sets of
// Cartesian-power factors, and the Poisson-suspension families.

#include "sml/base.hpp"
#include "sml/permgroup.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace sml::mset {

using std::int64_t;
using std::size_t;

// Generator descriptor for infinite families kept as truncations.
struct Tail {
  enum Kind { none, pow, semigroup_add, semigroup_mul, amk, example82 } kind = none;
  Int p;                       // pow base
  int64_t m = 0, k = 0;        // amk parameters
  std::vector<Int> gens;       // semigroup generators

  std::string str() const {
    switch (kind) {
      case none: return "";
      case pow: return "pow(" + p.str() + ")";
      case semigroup_add:
      case semigroup_mul: {
        std::string s = kind == semigroup_add ? "addsg(" : "mulsg(";
        for (size_t i = 0; i < gens.size(); ++i)
          s += (i ? "," : "") + gens[i].str();
        return s + ")";
      }
      case amk:
        return "amk(" + std::to_string(m) + "," + std::to_string(k) + ")";
      case example82: return "oddprod";
    }
    return "";
  }
};

struct MSet {
  std::vector<Int> elements;  // sorted, unique, positive
  bool has_infinity = false;
  Tail tail;
};

inline MSet make_mset(std::vector<Int> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  MSet e;
  e.elements = std::move(xs);
  return e;
}

inline void validate_mset(const MSet& e) {
  if (e.elements.empty() && e.tail.kind == Tail::none && !e.has_infinity)
    throw structural_error("multiplicity set must be nonempty");
  for (size_t i = 0; i < e.elements.size(); ++i) {
    if (e.elements[i] < 1)
      throw structural_error("multiplicities must be positive");
    if (i > 0 && e.elements[i] <= e.elements[i - 1])
      throw structural_error("elements must be sorted and distinct");
  }
}

inline bool contains(const MSet& e, const Int& x) {
  return std::binary_search(e.elements.begin(), e.elements.end(), x);
}

// E <> F = E u F u E*F.  An empty operand acts as the neutral element.
inline MSet diamond(const MSet& E, const MSet& F) {
  if (E.elements.empty()) return F;
  if (F.elements.empty()) return E;
  std::vector<Int> out = E.elements;
  out.insert(out.end(), F.elements.begin(), F.elements.end());
  for (const auto& a : E.elements)
    for (const auto& b : F.elements) out.push_back(a * b);
  auto r = make_mset(std::move(out));
  r.has_infinity = E.has_infinity || F.has_infinity;
  return r;
}

inline MSet scale(const Int& n, const MSet& E) {
  if (n < 1) throw structural_error("scale factor must be >= 1");
  MSet out = E;
  for (auto& x : out.elements) x *= n;
  return out;
}

// Largest n with E = n * E'; returns (n, E').
inline std::pair<Int, MSet> factor_scale(const MSet& E) {
  validate_mset(E);
  Int g = 0;
  for (const auto& x : E.elements) g = g == 0 ? x : boost::multiprecision::gcd(g, x);
  if (g == 0) g = 1;
  MSet out = E;
  for (auto& x : out.elements) x /= g;
  return {g, out};
}

enum class SemigroupOp { add, mul };

// Closure of gens under the operation, truncated at bound; the tail
// descriptor records the generating data.
inline MSet semigroup_closure(const std::vector<Int>& gens, SemigroupOp op,
                              const Int& bound) {
  if (gens.empty()) throw structural_error("semigroup needs generators");
  for (const auto& g : gens) {
    if (g < 1) throw structural_error("generators must be positive");
    if (g > bound) throw structural_error("bound must reach every generator");
  }
  std::set<Int> out(gens.begin(), gens.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Int> cur(out.begin(), out.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        Int c = op == SemigroupOp::add ? Int(a + b) : Int(a * b);
        if (c <= bound && !out.count(c)) {
          out.insert(c);
          grew = true;
        }
      }
  }
  MSet e = make_mset({out.begin(), out.end()});
  e.has_infinity = true;
  e.tail.kind = op == SemigroupOp::add ? Tail::semigroup_add : Tail::semigroup_mul;
  e.tail.gens = gens;
  return e;
}

inline bool closed_under(const MSet& E, SemigroupOp op, const Int& bound) {
  for (const auto& a : E.elements)
    for (const auto& b : E.elements) {
      Int c = op == SemigroupOp::add ? Int(a + b) : Int(a * b);
      if (c <= bound && !contains(E, c)) return false;
    }
  return true;
}

// ----- Cartesian-power multiplicity sets (Thm 3.5 shapes) -----

// M(T^{x n}) = {n!/k! : k = n-1, ..., 0} for the plain power.
inline MSet power_multiplicities(int64_t n) {
  if (n < 2) throw structural_error("power needs n >= 2");
  std::vector<Int> out;
  Int nf = 1;
  for (int64_t i = 2; i <= n; ++i) nf *= i;
  Int kf = 1;
  for (int64_t k = 0; k <= n - 1; ++k) {
    if (k > 1) kf *= k;
    out.push_back(nf / kf);
  }
  return make_mset(std::move(out));
}

// M(T^{x n}/Gamma) = {#(Gamma\S_n/S_k) : k = 1..n-1}.
inline MSet power_multiplicities(int64_t n, const permgroup::PermGroupSpec& gamma) {
  if (n < 2) throw structural_error("power needs n >= 2");
  std::vector<Int> out;
  for (int64_t k = 1; k <= n - 1; ++k)
    out.push_back(Int(permgroup::double_coset_count(gamma, n, k)));
  return make_mset(std::move(out));
}

// ----- Poisson-suspension families (section 8) -----

// A(m,k) = {(mn)!/(k^n n!)}; a good pair needs k to be the order of a
// subgroup of S_m, witnessed by explicit generators.
inline MSet poisson_amk(int64_t m, int64_t k, int64_t terms,
                        const std::vector<permgroup::Perm>& witness) {
  if (m < 1 || k < 1) throw structural_error("need m, k >= 1");
  if (terms < 1) throw structural_error("need at least one term");
  if (witness.empty() && k > 1)
    throw structural_error("provide generators of an order-" + std::to_string(k) +
                           " subgroup of S_" + std::to_string(m));
  for (const auto& g : witness) permgroup::validate_perm(g, m);
  if ((int64_t)permgroup::closure(witness, m).size() != k)
    throw structural_error("witness subgroup order differs from k");

  std::vector<Int> out;
  Int mn_fact = 1, n_fact = 1, kpow = 1;
  for (int64_t n = 1; n <= terms; ++n) {
    for (int64_t i = m * (n - 1) + 1; i <= m * n; ++i) mn_fact *= i;
    n_fact *= n;
    kpow *= k;
    out.push_back(mn_fact / (kpow * n_fact));
  }
  MSet e = make_mset(std::move(out));
  e.has_infinity = true;
  e.tail.kind = Tail::amk;
  e.tail.m = m;
  e.tail.k = k;
  return e;
}

// {1, 3, 3*5, 3*5*7, ...}
inline MSet poisson_example82(int64_t terms) {
  if (terms < 1) throw structural_error("need at least one term");
  std::vector<Int> out;
  Int t = 1;
  for (int64_t n = 1; n <= terms; ++n) {
    out.push_back(t);
    t *= 2 * n + 1;
  }
  MSet e = make_mset(std::move(out));
  e.has_infinity = true;
  e.tail.kind = Tail::example82;
  return e;
}

// {p, p^2, p^3, ...}
inline MSet poisson_exp_p(const Int& p, int64_t terms) {
  if (p < 2) throw structural_error("need p >= 2");
  if (terms < 1) throw structural_error("need at least one term");
  std::vector<Int> out;
  Int t = 1;
  for (int64_t n = 1; n <= terms; ++n) {
    t *= p;
    out.push_back(t);
  }
  MSet e = make_mset(std::move(out));
  e.has_infinity = true;
  e.tail.kind = Tail::pow;
  e.tail.p = p;
  return e;
}

}  // namespace sml::mset

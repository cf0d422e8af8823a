#pragma once

// Formal-spectrum oracle.  Spectral measures are replaced by finite lists of
// generic symbols; two monomials agree iff their factor multisets agree, and
// points with a repeated factor are null.  Under that convention the
// tensor/symmetric/invariant-power multiplicity identities, the
// Cartesian-power decomposition, exp-operator grading, strong disjointness,
// and the G_n regular-representation count become exact finite statements.

#include "sml/mset.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sml::specoracle {

using std::int64_t;
using std::size_t;

struct FormalSpectrum {
  std::vector<std::string> symbols;  // distinct generic generators
};

inline void validate_spectrum(const FormalSpectrum& s) {
  auto names = s.symbols;
  std::sort(names.begin(), names.end());
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw structural_error("symbol names must be nonempty");
    if (i > 0 && names[i] == names[i - 1])
      throw structural_error("symbols must be distinct");
  }
}

namespace detail {

inline Int factorial(int64_t n) {
  Int f = 1;
  for (int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Slot patterns: injective placements of j distinct symbols into n slots,
// empty slots indistinguishable.  A subgroup of S_n acts on the slots;
// orbits are counted by keeping the lexicographic minimum of each orbit.
using Pattern = std::vector<int8_t>;  // -1 empty, else symbol index

inline std::vector<Pattern> all_patterns(int64_t n, int64_t j) {
  std::vector<Pattern> out;
  Pattern cur((size_t)n, -1);
  auto rec = [&](auto&& self, int64_t placed) -> void {
    if (placed == j) {
      out.push_back(cur);
      return;
    }
    for (size_t s = 0; s < (size_t)n; ++s)
      if (cur[s] < 0) {
        cur[s] = (int8_t)placed;
        self(self, placed + 1);
        cur[s] = -1;
      }
  };
  rec(rec, 0);
  return out;
}

inline int64_t pattern_orbits(const std::vector<permgroup::Perm>& G, int64_t n,
                              int64_t j) {
  auto pats = all_patterns(n, j);
  int64_t count = 0;
  Pattern moved((size_t)n);
  for (const auto& p : pats) {
    bool minimal = true;
    for (const auto& g : G) {
      for (size_t s = 0; s < (size_t)n; ++s) moved[g[s]] = p[s];
      if (moved < p) {
        minimal = false;
        break;
      }
    }
    if (minimal) ++count;
  }
  return count;
}

}  // namespace detail

// ----- invariant powers (Prop 3.4 shapes) -----

// M(V^{x n / Gamma}) = {n!/#Gamma}: Gamma acts freely on orderings of n
// distinct symbols.  The orbit count is enumerated and checked against the
// formula before being returned.
inline mset::MSet invariant_power_mset(const FormalSpectrum& spec, int64_t n,
                                       const permgroup::PermGroupSpec& gamma) {
  validate_spectrum(spec);
  permgroup::validate_spec(gamma);
  if (n < 1) throw structural_error("power degree must be >= 1");
  if (gamma.n != n) throw structural_error("group degree must match the power");
  if (n > (int64_t)spec.symbols.size()) throw structural_error("no generic points");

  auto G = permgroup::closure(gamma.generators, n);
  int64_t orbits = detail::pattern_orbits(G, n, n);
  Int formula = detail::factorial(n) / (int64_t)G.size();
  if (Int(orbits) != formula)
    throw structural_error("free-action lemma violated");  // unreachable on injective tuples
  return mset::make_mset({Int(orbits)});
}

// M(V^{(x) n}) = n! * M(V^{(.) n}) elementwise: returns the pair and asserts
// the ratio law.
inline std::pair<mset::MSet, mset::MSet> tensor_vs_sym(const FormalSpectrum& spec,
                                                       int64_t n) {
  permgroup::PermGroupSpec trivial, full;
  trivial.n = n;
  full.n = n;
  if (n >= 2) {
    full.generators.push_back(permgroup::from_cycles(n, {{0, 1}}));
    std::vector<int64_t> cyc(n);
    for (int64_t i = 0; i < n; ++i) cyc[(size_t)i] = i;
    full.generators.push_back(permgroup::from_cycles(n, {cyc}));
  }
  auto tensor = invariant_power_mset(spec, n, trivial);
  auto sym = invariant_power_mset(spec, n, full);
  Int nf = detail::factorial(n);
  if (tensor.elements.size() != sym.elements.size())
    throw structural_error("ratio law violated");
  for (size_t i = 0; i < sym.elements.size(); ++i)
    if (tensor.elements[i] != nf * sym.elements[i])
      throw structural_error("ratio law violated");
  return {tensor, sym};
}

// ----- Cartesian powers -----

// L2 of the n-fold product splits by grade: a grade-j point carries one copy
// per orbit of slot patterns.  Each grade is re-counted through the
// double-coset identity #(Gamma \ S_n / S_{n-j}).
inline mset::MSet cartesian_mset(int64_t n, const permgroup::PermGroupSpec& gamma) {
  permgroup::validate_spec(gamma);
  if (n < 2) throw structural_error("cartesian power needs n >= 2");
  if (gamma.n != n) throw structural_error("group degree must match the power");

  auto G = permgroup::closure(gamma.generators, n);
  std::vector<Int> out;
  for (int64_t j = 1; j <= n; ++j) {
    int64_t orbits = detail::pattern_orbits(G, n, j);
    int64_t k = n - j >= 1 ? n - j : 1;  // S_0 and S_1 both act trivially
    if (orbits != permgroup::double_coset_count(gamma, n, k))
      throw structural_error("pattern orbits disagree with double cosets");
    out.push_back(Int(orbits));
  }
  return mset::make_mset(std::move(out));
}

inline mset::MSet cartesian_mset(int64_t n) {
  permgroup::PermGroupSpec trivial;
  trivial.n = n;
  return cartesian_mset(n, trivial);
}

// ----- exp-operator grading (section 8 shapes) -----

// exp U = (+) over n of (U^{(.) n})^{(+) p^n}: grade-n generic points carry
// multiplicity p^n.
inline mset::MSet exp_mset(int64_t p, int64_t grades) {
  if (p < 1) throw structural_error("need p >= 1");
  if (grades < 1) throw structural_error("need at least one grade");
  std::vector<Int> out;
  Int t = 1;
  for (int64_t g = 1; g <= grades; ++g) {
    t *= p;
    out.push_back(t);
  }
  auto e = mset::make_mset(std::move(out));
  e.has_infinity = true;
  e.tail.kind = mset::Tail::pow;
  e.tail.p = p;
  return e;
}

// Sym-square variant: grade n of exp(U^{(.)2}) has multiplicity
// (2n)!/(2^n n!), realized as the invariant power of 2n symbols under the
// hyperoctahedral group (pair swaps and block swaps).
inline mset::MSet exp_sym_square_mset(int64_t grades) {
  if (grades < 1) throw structural_error("need at least one grade");
  if (grades > 4) throw structural_error("sym-square grading is capped at 4 terms");
  std::vector<Int> out;
  for (int64_t g = 1; g <= grades; ++g) {
    int64_t deg = 2 * g;
    FormalSpectrum spec;
    for (int64_t i = 0; i < deg; ++i) spec.symbols.push_back("z" + std::to_string(i));
    permgroup::PermGroupSpec hyper;
    hyper.n = deg;
    for (int64_t i = 0; i < g; ++i)
      hyper.generators.push_back(permgroup::from_cycles(deg, {{2 * i, 2 * i + 1}}));
    for (int64_t i = 0; i + 1 < g; ++i)
      hyper.generators.push_back(permgroup::from_cycles(
          deg, {{2 * i, 2 * i + 2}, {2 * i + 1, 2 * i + 3}}));
    auto one = invariant_power_mset(spec, deg, hyper);
    out.push_back(one.elements.at(0));
  }
  auto e = mset::make_mset(std::move(out));
  e.has_infinity = true;
  e.tail.kind = mset::Tail::example82;
  return e;
}

// ----- G_n regular-representation check (Prop 5.1 shape) -----

// The n*m-dimensional model of G_n = Z^n x| Z/n: m orbits of n generic
// characters, the cyclic generator shifting within each orbit.  Characters
// are carried as formal exponents ("logs" of generic roots); genericity is
// the finite system of inequations below.  Returns the essential range of
// the eigenvalue-multiplicity function of U at e_* = (1,...,1,0).
inline mset::MSet gn_rep_check(int64_t n, int64_t m,
                               const std::vector<std::vector<int64_t>>& logs) {
  if (n < 2) throw structural_error("need n >= 2");
  if (m < 1) throw structural_error("need m >= 1");
  if ((int64_t)logs.size() != m) throw structural_error("need one character orbit per m");
  for (const auto& orbit : logs)
    if ((int64_t)orbit.size() != n)
      throw structural_error("each orbit needs n character slots");

  // genericity: distinct characters, pairwise-distinct ratios, distinct
  // orbit products
  std::vector<int64_t> flat;
  for (const auto& orbit : logs) flat.insert(flat.end(), orbit.begin(), orbit.end());
  {
    auto s = flat;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw structural_error("genericity violated");
    std::vector<int64_t> diffs;
    for (auto a : flat)
      for (auto b : flat)
        if (a != b) diffs.push_back(a - b);
    std::sort(diffs.begin(), diffs.end());
    if (std::adjacent_find(diffs.begin(), diffs.end()) != diffs.end())
      throw structural_error("genericity violated");
  }

  // eigenvalue of e_* on basis vector (t, j): the shifted character summed
  // over all n coordinates
  std::map<int64_t, int64_t> mult;
  for (int64_t t = 0; t < m; ++t)
    for (int64_t j = 0; j < n; ++j) {
      int64_t eig = 0;
      for (int64_t k = 0; k < n; ++k) eig += logs[(size_t)t][(size_t)((k + j) % n)];
      ++mult[eig];
    }
  if ((int64_t)mult.size() != m) throw structural_error("genericity violated");

  std::vector<Int> counts;
  for (const auto& [eig, c] : mult) counts.push_back(Int(c));
  auto e = mset::make_mset(std::move(counts));
  if (e.elements != std::vector<Int>{Int(n)})
    throw structural_error("homogeneity check failed");  // unreachable under genericity
  return e;
}

inline mset::MSet gn_rep_check(int64_t n, int64_t m) {
  if (n < 2) throw structural_error("need n >= 2");
  if (m < 1) throw structural_error("need m >= 1");
  if (n * m > 60) throw structural_error("default character table is capped at 60 slots");
  std::vector<std::vector<int64_t>> logs((size_t)m, std::vector<int64_t>((size_t)n));
  for (int64_t t = 0; t < m; ++t)
    for (int64_t k = 0; k < n; ++k)
      logs[(size_t)t][(size_t)k] = int64_t(1) << (t * n + k);
  return gn_rep_check(n, m, logs);
}

// ----- strong disjointness (Prop 3.8 shape) -----

// Disjoint symbol sets make the product map injective on generic points, so
// multiplicities multiply.
inline mset::MSet strong_disjoint_product(const FormalSpectrum& a,
                                          const mset::MSet& Ma,
                                          const FormalSpectrum& b,
                                          const mset::MSet& Mb) {
  validate_spectrum(a);
  validate_spectrum(b);
  for (const auto& x : a.symbols)
    for (const auto& y : b.symbols)
      if (x == y)
        throw structural_error("not strongly disjoint in the formal model");
  if (a.symbols.empty() || b.symbols.empty()) return mset::MSet{};
  if (Ma.elements.empty() || Mb.elements.empty()) return mset::MSet{};
  std::vector<Int> out;
  for (const auto& x : Ma.elements)
    for (const auto& y : Mb.elements) out.push_back(x * y);
  return mset::make_mset(std::move(out));
}

// ----- census (dimension conservation) -----

// Non-null points of the n-fold tensor power and their total multiplicity;
// enumerated over all n-tuples of symbols so the injective-arrangement count
// is observed rather than assumed.
struct PowerCensus {
  Int points = 0;              // distinct non-null factor multisets
  Int null_tuples = 0;         // tuples hitting the diagonal
  Int total_multiplicity = 0;  // sum of multiplicities over non-null points
};

inline PowerCensus tensor_power_census(const FormalSpectrum& spec, int64_t n,
                                       const permgroup::PermGroupSpec& gamma) {
  validate_spectrum(spec);
  permgroup::validate_spec(gamma);
  if (n < 1) throw structural_error("power degree must be >= 1");
  if (gamma.n != n) throw structural_error("group degree must match the power");
  int64_t s = (int64_t)spec.symbols.size();
  Int tuples = 1;
  for (int64_t i = 0; i < n; ++i) tuples *= s;
  if (tuples > 100000) throw structural_error("census enumeration is capped at 1e5 tuples");

  auto G = permgroup::closure(gamma.generators, n);
  Int per_point = n <= s ? Int(detail::pattern_orbits(G, n, n)) : Int(0);

  PowerCensus c;
  std::map<std::vector<int64_t>, char> seen;
  std::vector<int64_t> tup((size_t)n, 0);
  for (Int it = 0; it < tuples; ++it) {
    auto sorted = tup;
    std::sort(sorted.begin(), sorted.end());
    bool diag = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    if (diag) {
      c.null_tuples += 1;
    } else if (!seen.count(sorted)) {
      seen[sorted] = 1;
      c.points += 1;
      c.total_multiplicity += per_point;
    }
    for (size_t d = 0; d < (size_t)n; ++d) {  // odometer
      if (++tup[d] < s) break;
      tup[d] = 0;
    }
  }
  return c;
}

}  // namespace sml::specoracle

#pragma once

// Small permutation groups: closures, the subgroup lattice of S_n for
// n <= 5, a curated catalog at n = 6, and double-coset counts
// #(Gamma \ S_n / S_k) computed two independent ways.

#include "sml/base.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace sml::permgroup {

using std::int64_t;
using std::size_t;

// Images 0-based; degree = size.
using Perm = std::vector<uint8_t>;

inline Perm identity_perm(int64_t n) {
  Perm p((size_t)n);
  std::iota(p.begin(), p.end(), (uint8_t)0);
  return p;
}

// (a * b)(x) = a(b(x))
inline Perm compose(const Perm& a, const Perm& b) {
  Perm out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

inline Perm inverse(const Perm& a) {
  Perm out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[a[i]] = (uint8_t)i;
  return out;
}

inline void validate_perm(const Perm& p, int64_t n) {
  if ((int64_t)p.size() != n) throw structural_error("permutation degree mismatch");
  std::vector<char> seen((size_t)n, 0);
  for (auto x : p) {
    if (x >= n || seen[x]) throw structural_error("not a bijection of {0..n-1}");
    seen[x] = 1;
  }
}

// Cycle notation helper for catalog entries: cycles over 0-based points.
inline Perm from_cycles(int64_t n, const std::vector<std::vector<int64_t>>& cycles) {
  Perm p = identity_perm(n);
  for (const auto& c : cycles)
    for (size_t i = 0; i < c.size(); ++i)
      p[(size_t)c[i]] = (uint8_t)c[(i + 1) % c.size()];
  validate_perm(p, n);
  return p;
}

struct PermGroupSpec {
  int64_t n = 1;
  std::vector<Perm> generators;  // empty list generates the trivial group
};

inline void validate_spec(const PermGroupSpec& s) {
  if (s.n < 1) throw structural_error("degree must be >= 1");
  for (const auto& g : s.generators) validate_perm(g, s.n);
}

// Dense key for membership tables: digits base n.  Degrees stay tiny
// (n <= 8), so n^n fits comfortably.
inline uint32_t perm_key(const Perm& p, int64_t n) {
  uint32_t k = 0;
  for (auto x : p) k = k * (uint32_t)n + x;
  return k;
}

inline size_t key_space(int64_t n) {
  if (n > 8) throw structural_error("permutation routines are capped at degree 8");
  size_t s = 1;
  for (int64_t i = 0; i < n; ++i) s *= (size_t)n;
  return s;
}

// Closure under composition, sorted.
inline std::vector<Perm> closure(const std::vector<Perm>& gens, int64_t n) {
  std::vector<char> seen(key_space(n), 0);
  std::vector<Perm> elems{identity_perm(n)};
  seen[perm_key(elems[0], n)] = 1;
  for (size_t i = 0; i < elems.size(); ++i)  // elems doubles as the queue
    for (const auto& g : gens) {
      Perm q = compose(g, elems[i]);
      uint32_t key = perm_key(q, n);
      if (!seen[key]) {
        seen[key] = 1;
        elems.push_back(std::move(q));
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

inline std::vector<Perm> symmetric_group(int64_t n) {
  std::vector<Perm> all;
  Perm p = identity_perm(n);
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

// S_k as the subgroup fixing every point >= k.
inline bool fixes_from(const Perm& p, int64_t k) {
  for (size_t i = (size_t)k; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

// Every subgroup of S_n, n <= 5, by closure-under-extension from the
// trivial group.  Counts: 1, 2, 6, 30, 156.
inline std::vector<std::vector<Perm>> all_subgroups(int64_t n) {
  if (n < 1 || n > 5)
    throw structural_error("exhaustive subgroup enumeration is capped at degree 5");
  auto all = symmetric_group(n);
  std::vector<std::vector<Perm>> groups{{identity_perm(n)}};
  for (size_t i = 0; i < groups.size(); ++i) {
    auto base = groups[i];  // copy: groups grows below
    for (const auto& g : all) {
      if (std::binary_search(base.begin(), base.end(), g)) continue;
      auto ext = base;
      ext.push_back(g);
      auto H = closure(ext, n);
      if (std::find(groups.begin(), groups.end(), H) == groups.end())
        groups.push_back(H);
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  return groups;
}

struct NamedSubgroup {
  std::string name;
  PermGroupSpec spec;
};

// Curated degree-6 catalog: Young subgroups, cyclic representatives of each
// cycle type, dihedral/Klein samples, A_5, both S_5 embeddings, A_6, S_6.
inline std::vector<NamedSubgroup> catalog_degree6() {
  auto mk = [](std::string name,
               std::vector<std::vector<std::vector<int64_t>>> gens) {
    NamedSubgroup s;
    s.name = std::move(name);
    s.spec.n = 6;
    for (const auto& g : gens) s.spec.generators.push_back(from_cycles(6, g));
    return s;
  };
  return {
      mk("trivial", {}),
      mk("C2", {{{0, 1}}}),
      mk("C2x", {{{0, 1}, {2, 3}}}),
      mk("C2xxx", {{{0, 1}, {2, 3}, {4, 5}}}),
      mk("C3", {{{0, 1, 2}}}),
      mk("C3x", {{{0, 1, 2}, {3, 4, 5}}}),
      mk("C4", {{{0, 1, 2, 3}}}),
      mk("C5", {{{0, 1, 2, 3, 4}}}),
      mk("C6", {{{0, 1, 2, 3, 4, 5}}}),
      mk("V4", {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}}),
      mk("S2xS2xS2", {{{0, 1}}, {{2, 3}}, {{4, 5}}}),
      mk("S3", {{{0, 1}}, {{0, 1, 2}}}),
      mk("S3xS3", {{{0, 1}}, {{0, 1, 2}}, {{3, 4}}, {{3, 4, 5}}}),
      mk("D6", {{{0, 1, 2, 3, 4, 5}}, {{0, 5}, {1, 4}, {2, 3}}}),
      mk("S4", {{{0, 1}}, {{0, 1, 2, 3}}}),
      mk("S4xS2", {{{0, 1}}, {{0, 1, 2, 3}}, {{4, 5}}}),
      mk("A5", {{{0, 1, 2}}, {{0, 1, 2, 3, 4}}}),
      mk("S5", {{{0, 1}}, {{0, 1, 2, 3, 4}}}),
      mk("S5-transitive", {{{0, 1, 2, 3, 4}}, {{0, 5}, {1, 2}, {3, 4}}}),
      mk("A6", {{{0, 1, 2}}, {{1, 2, 3, 4, 5}}}),
      mk("S6", {{{0, 1}}, {{0, 1, 2, 3, 4, 5}}}),
  };
}

// #(Gamma \ S_n / S_k) by double-coset BFS, cross-checked against the
// Burnside orbit count of Gamma x S_k acting by (g, t): s -> g s t^{-1}
// (a pair (g, s) fixes iff s^{-1} g s lands in S_k).
inline int64_t double_coset_count(const PermGroupSpec& gamma, int64_t n, int64_t k) {
  validate_spec(gamma);
  if (gamma.n != n) throw structural_error("group degree does not match n");
  if (k < 1 || k > n) throw structural_error("k must lie in [1, n]");

  auto G = closure(gamma.generators, n);
  auto all = symmetric_group(n);
  std::vector<int> id(key_space(n), -1);
  for (size_t i = 0; i < all.size(); ++i) id[perm_key(all[i], n)] = (int)i;

  // right generators: adjacent transpositions inside the first k points
  std::vector<Perm> right;
  for (int64_t i = 0; i + 1 < k; ++i) {
    Perm t = identity_perm(n);
    std::swap(t[(size_t)i], t[(size_t)i + 1]);
    right.push_back(t);
  }

  std::vector<char> seen(all.size(), 0);
  int64_t components = 0;
  std::vector<int> stack;
  for (size_t s0 = 0; s0 < all.size(); ++s0) {
    if (seen[s0]) continue;
    ++components;
    seen[s0] = 1;
    stack.assign(1, (int)s0);
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      const Perm& s = all[(size_t)cur];
      auto visit = [&](const Perm& q) {
        int qi = id[perm_key(q, n)];
        if (!seen[(size_t)qi]) {
          seen[(size_t)qi] = 1;
          stack.push_back(qi);
        }
      };
      for (const auto& g : G) visit(compose(g, s));
      for (const auto& t : right) visit(compose(s, t));
    }
  }

  int64_t fixsum = 0;
  for (const auto& g : G)
    for (const auto& s : all)
      if (fixes_from(compose(compose(inverse(s), g), s), k)) ++fixsum;
  int64_t kfact = 1;
  for (int64_t i = 2; i <= k; ++i) kfact *= i;
  if (fixsum % ((int64_t)G.size() * kfact) != 0 ||
      fixsum / ((int64_t)G.size() * kfact) != components)
    throw structural_error("double-coset counting methods disagree");
  return components;
}

}  // namespace sml::permgroup

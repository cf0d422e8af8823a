#pragma once

// Finite-abelian orbit algebra: monomial automorphisms of direct sums of
// cyclic groups, orbit/multiplicity-set computations, and the finite
// realization of prescribed multiplicity sets (direct-sum construction with
// a cyclic automorphism group; blocks B_i = Z/q_i with q_i prime, q_i = 1
// mod p_i, cycled through p_1...p_{i-1} coordinate copies).

#include "sml/base.hpp"
#include "sml/cyclotomic.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace sml::algebra {

using std::int64_t;
using std::size_t;

// ----- groups and automorphisms -----

struct Block {
  std::string name;
  std::vector<size_t> slots;
};

struct FinAbGroup {
  std::vector<int64_t> summands;  // moduli q_j >= 2, slot-indexed
  std::vector<Block> blocks;      // partition of slots; informational

  size_t slot_count() const { return summands.size(); }
};

// Dense residue vector aligned with the group's slots.
using GroupElement = std::vector<int64_t>;

struct MonomialAut {
  std::vector<size_t> perm;    // slot j contributes to slot perm[j]
  std::vector<int64_t> units;  // multiplier applied to slot j's residue
};

using SupportSlots = std::vector<size_t>;  // sorted slot indices

inline void validate_group(const FinAbGroup& G) {
  // an empty summand list is the trivial group (used for degenerate fibers)
  for (auto q : G.summands)
    if (q < 2) throw structural_error("cyclic summand modulus must be >= 2");
  if (!G.blocks.empty()) {
    std::vector<char> seen(G.slot_count(), 0);
    for (const auto& b : G.blocks)
      for (auto s : b.slots) {
        if (s >= G.slot_count() || seen[s])
          throw structural_error("block map is not a partition of the slots");
        seen[s] = 1;
      }
    for (auto c : seen)
      if (!c) throw structural_error("block map misses a slot");
  }
}

inline void validate_aut(const FinAbGroup& G, const MonomialAut& v) {
  size_t n = G.slot_count();
  if (v.perm.size() != n || v.units.size() != n)
    throw structural_error("automorphism shape does not match group");
  std::vector<char> hit(n, 0);
  for (size_t j = 0; j < n; ++j) {
    size_t p = v.perm[j];
    if (p >= n || hit[p]) throw structural_error("perm is not a permutation");
    hit[p] = 1;
    if (G.summands[p] != G.summands[j])
      throw structural_error("perm moves a slot across different moduli");
    if (gcd64(v.units[j], G.summands[j]) != 1)
      throw structural_error("unit not coprime to its modulus");
  }
}

inline GroupElement zero(const FinAbGroup& G) {
  return GroupElement(G.slot_count(), 0);
}

inline bool is_zero(const GroupElement& g) {
  return std::all_of(g.begin(), g.end(), [](int64_t x) { return x == 0; });
}

inline GroupElement normalize(const FinAbGroup& G, GroupElement g) {
  if (g.size() != G.slot_count())
    throw structural_error("element shape does not match group");
  for (size_t j = 0; j < g.size(); ++j) {
    g[j] %= G.summands[j];
    if (g[j] < 0) g[j] += G.summands[j];
  }
  return g;
}

// Sparse construction: {slot: residue}, omitted slots are 0.
inline GroupElement from_sparse(const FinAbGroup& G,
                                const std::vector<std::pair<size_t, int64_t>>& kv) {
  GroupElement g = zero(G);
  for (auto [s, r] : kv) {
    if (s >= G.slot_count()) throw structural_error("sparse slot out of range");
    g[s] = r;
  }
  return normalize(G, g);
}

inline GroupElement add(const FinAbGroup& G, const GroupElement& a,
                        const GroupElement& b) {
  GroupElement out(G.slot_count());
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = (a[j] + b[j]) % G.summands[j];
  return out;
}

inline GroupElement neg(const FinAbGroup& G, const GroupElement& a) {
  GroupElement out(G.slot_count());
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = a[j] == 0 ? 0 : G.summands[j] - a[j];
  return out;
}

inline GroupElement apply(const FinAbGroup& G, const MonomialAut& v,
                          const GroupElement& g) {
  GroupElement out(G.slot_count());
  for (size_t j = 0; j < g.size(); ++j)
    out[v.perm[j]] = (v.units[j] * g[j]) % G.summands[v.perm[j]];
  return out;
}

inline MonomialAut identity_aut(const FinAbGroup& G) {
  MonomialAut v;
  v.perm.resize(G.slot_count());
  std::iota(v.perm.begin(), v.perm.end(), 0);
  v.units.assign(G.slot_count(), 1);
  return v;
}

// (a then b): apply a first.
inline MonomialAut compose(const FinAbGroup& G, const MonomialAut& b,
                           const MonomialAut& a) {
  MonomialAut out;
  out.perm.resize(G.slot_count());
  out.units.resize(G.slot_count());
  for (size_t j = 0; j < G.slot_count(); ++j) {
    out.perm[j] = b.perm[a.perm[j]];
    out.units[j] = (a.units[j] * b.units[a.perm[j]]) % G.summands[out.perm[j]];
  }
  return out;
}

inline MonomialAut aut_pow(const FinAbGroup& G, const MonomialAut& v, int64_t e) {
  MonomialAut acc = identity_aut(G), base = v;
  if (e < 0) throw structural_error("aut_pow: negative exponent unsupported");
  while (e) {
    if (e & 1) acc = compose(G, base, acc);
    base = compose(G, base, base);
    e >>= 1;
  }
  return acc;
}

inline bool aut_equal(const MonomialAut& a, const MonomialAut& b) {
  return a.perm == b.perm && a.units == b.units;
}

// Dual (adjoint) automorphism: chi_{v^(g)}(k) = chi_g(v k).  Inverse
// permutation, units transported along it.
inline MonomialAut dual_aut(const FinAbGroup& G, const MonomialAut& v) {
  MonomialAut out;
  out.perm.resize(G.slot_count());
  out.units.resize(G.slot_count());
  for (size_t j = 0; j < G.slot_count(); ++j) out.perm[v.perm[j]] = j;
  for (size_t j = 0; j < G.slot_count(); ++j)
    out.units[v.perm[j]] = v.units[j] % G.summands[v.perm[j]];
  return out;
}

// ----- orbits and multiplicity sets -----

// Forward orbit of g up to first return (always a cycle: v is a bijection).
inline std::vector<GroupElement> orbit(const FinAbGroup& G, const MonomialAut& v,
                                       const GroupElement& g0) {
  std::vector<GroupElement> out;
  GroupElement g = normalize(G, g0);
  GroupElement start = g;
  do {
    out.push_back(g);
    g = apply(G, v, g);
  } while (g != start);
  return out;
}

inline int64_t group_order_guarded(const FinAbGroup& G, int64_t guard) {
  Int total = 1;
  for (auto q : G.summands) {
    total *= q;
    if (total > guard)
      throw guard_error("group order exceeds guard (" + std::to_string(guard) + ")");
  }
  return total.convert_to<int64_t>();
}

// L(G, v) = {#O(g) : 0 != g in G}.  Walks every element once (orbit members
// share a length, so each orbit is charged a single traversal).
inline std::set<int64_t> multiplicity_set_L(const FinAbGroup& G,
                                            const MonomialAut& v,
                                            int64_t order_guard = 1000000) {
  validate_group(G);
  validate_aut(G, v);
  int64_t total = group_order_guarded(G, order_guard);
  std::vector<int64_t> stride(G.slot_count());
  int64_t acc = 1;
  for (size_t j = 0; j < G.slot_count(); ++j) {
    stride[j] = acc;
    acc *= G.summands[j];
  }
  auto index_of = [&](const GroupElement& g) {
    int64_t ix = 0;
    for (size_t j = 0; j < g.size(); ++j) ix += g[j] * stride[j];
    return ix;
  };
  std::vector<char> visited((size_t)total, 0);
  visited[0] = 1;
  std::set<int64_t> out;
  GroupElement g = zero(G);
  for (int64_t ix = 1; ix < total; ++ix) {
    // odometer step
    for (size_t j = 0; j < g.size(); ++j) {
      if (++g[j] < G.summands[j]) break;
      g[j] = 0;
    }
    if (visited[(size_t)ix]) continue;
    int64_t len = 0;
    GroupElement h = g;
    do {
      visited[(size_t)index_of(h)] = 1;
      h = apply(G, v, h);
      ++len;
    } while (h != g);
    out.insert(len);
  }
  if (out.empty()) throw structural_error("trivial group: no nonzero elements");
  return out;
}

// L(G, v, H) = {#(O(h) ∩ H) : 0 != h in H}, H the coordinate subgroup
// supported on the given slots.
inline std::set<int64_t> multiplicity_set_L(const FinAbGroup& G,
                                            const MonomialAut& v,
                                            const SupportSlots& support,
                                            int64_t subgroup_guard = 10000000) {
  validate_group(G);
  validate_aut(G, v);
  if (support.empty()) throw structural_error("support subgroup is trivial");
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= G.slot_count()) throw structural_error("support slot out of range");
    if (i && support[i] <= support[i - 1])
      throw structural_error("support slots must be strictly increasing");
  }
  std::vector<char> in_support(G.slot_count(), 0);
  for (auto s : support) in_support[s] = 1;

  Int hsize = 1;
  for (auto s : support) {
    hsize *= G.summands[s];
    if (hsize > subgroup_guard) throw guard_error("support subgroup exceeds guard");
  }
  int64_t total = hsize.convert_to<int64_t>();

  std::vector<int64_t> stride(support.size());
  int64_t acc = 1;
  for (size_t i = 0; i < support.size(); ++i) {
    stride[i] = acc;
    acc *= G.summands[support[i]];
  }
  auto member = [&](const GroupElement& g) {
    for (size_t j = 0; j < g.size(); ++j)
      if (g[j] != 0 && !in_support[j]) return false;
    return true;
  };
  auto h_index = [&](const GroupElement& g) {
    int64_t ix = 0;
    for (size_t i = 0; i < support.size(); ++i) ix += g[support[i]] * stride[i];
    return ix;
  };

  std::vector<char> visited((size_t)total, 0);
  visited[0] = 1;
  std::set<int64_t> out;
  GroupElement h = zero(G);
  for (int64_t ix = 1; ix < total; ++ix) {
    for (size_t i = 0; i < support.size(); ++i) {
      if (++h[support[i]] < G.summands[support[i]]) break;
      h[support[i]] = 0;
    }
    if (visited[(size_t)ix]) continue;
    // walk the v-orbit of h, counting and marking its H-members
    int64_t count = 0;
    GroupElement x = h;
    do {
      if (member(x)) {
        ++count;
        visited[(size_t)h_index(x)] = 1;
      }
      x = apply(G, v, x);
    } while (x != h);
    out.insert(count);
  }
  if (out.empty()) throw structural_error("trivial subgroup: no nonzero elements");
  return out;
}

inline bool is_lcm_closed(const std::set<int64_t>& E) {
  for (auto a : E)
    for (auto b : E) {
      if (a <= 0 || b <= 0) throw structural_error("lcm closure needs positive entries");
      int64_t l = a / gcd64(a, b) * b;
      if (!E.count(l)) return false;
    }
  return true;
}

// ----- realization of prescribed multiplicity sets -----

struct Realization {
  FinAbGroup G;
  MonomialAut v;
  SupportSlots support;  // H = coordinate subgroup on these slots
};

namespace detail {

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Smallest prime q = 1 (mod p); for p = 1 take q = 2.
inline int64_t block_prime(int64_t p) {
  if (p == 1) return 2;
  for (int64_t q = p + 1;; q += p)
    if (is_prime(q)) return q;
}

inline int64_t unit_order(int64_t u, int64_t q) {
  int64_t x = u % q, n = 1;
  while (x != 1) {
    x = (x * u) % q;
    ++n;
  }
  return n;
}

// Smallest unit of multiplicative order p mod q (exists: q = 1 mod p).
inline int64_t block_unit(int64_t p, int64_t q) {
  if (p == 1) return 1;
  for (int64_t u = 2; u < q; ++u)
    if (unit_order(u, q) == p) return u;
  throw structural_error("no unit of the requested order (q != 1 mod p?)");
}

}  // namespace detail

// Direct-sum realization: G = B_1 + B_2^{p1} + B_3^{p1 p2} + ..., each block
// cycled by the automorphism with one twisted edge; H = first slot of each
// block.  Postcondition L(G, v, H) = E is re-verified by enumeration.
inline Realization realize_finite(const std::set<int64_t>& E,
                                  int64_t slot_guard = 10000) {
  if (E.empty()) throw structural_error("cannot realize the empty set");
  for (auto p : E)
    if (p < 1) throw structural_error("multiplicities must be >= 1");
  std::vector<int64_t> ps(E.begin(), E.end());  // p_1 < p_2 < ... < p_k

  Realization R;
  Int copies = 1;  // p_1 ... p_{i-1}
  for (size_t i = 0; i < ps.size(); ++i) {
    if (copies > slot_guard)
      throw guard_error("realization slot count exceeds guard (" +
                        std::to_string(slot_guard) + ")");
    int64_t c = copies.convert_to<int64_t>();
    int64_t q = detail::block_prime(ps[i]);
    int64_t u = detail::block_unit(ps[i], q);
    Block blk;
    blk.name = "B" + std::to_string(i + 1);
    size_t base = R.G.summands.size();
    if ((Int)base + c > slot_guard)
      throw guard_error("realization slot count exceeds guard (" +
                        std::to_string(slot_guard) + ")");
    for (int64_t j = 0; j < c; ++j) {
      R.G.summands.push_back(q);
      blk.slots.push_back(base + (size_t)j);
    }
    R.G.blocks.push_back(blk);
    // cyclic shift within the block, unit on the wrap-around edge
    for (int64_t j = 0; j < c; ++j) {
      R.v.perm.push_back(base + (size_t)((j + 1) % c));
      R.v.units.push_back(j == c - 1 ? u : 1);
    }
    R.support.push_back(base);
    copies *= ps[i];
  }
  validate_group(R.G);
  validate_aut(R.G, R.v);
  auto got = multiplicity_set_L(R.G, R.v, R.support);
  if (got != E) throw structural_error("realization failed internal verification");
  return R;
}

// For lcm-closed E: one slot per element, diagonal units, full group.
inline Realization realize_lcm_closed(const std::set<int64_t>& E,
                                      int64_t order_guard = 1000000) {
  if (E.empty()) throw structural_error("cannot realize the empty set");
  if (!is_lcm_closed(E)) throw structural_error("set is not lcm-closed");
  Realization R;
  size_t j = 0;
  for (auto p : E) {
    int64_t q = detail::block_prime(p);
    int64_t u = detail::block_unit(p, q);
    R.G.summands.push_back(q);
    R.G.blocks.push_back({"C" + std::to_string(p), {j}});
    R.v.perm.push_back(j);
    R.v.units.push_back(u);
    R.support.push_back(j);
    ++j;
  }
  auto got = multiplicity_set_L(R.G, R.v, order_guard);
  if (got != E) throw structural_error("lcm-closed realization failed verification");
  return R;
}

// ----- characters and orbit averages -----

inline int64_t group_exponent(const FinAbGroup& G) {
  int64_t m = 1;
  for (auto q : G.summands) m = m / gcd64(m, q) * q;
  return m;
}

// chi_g(k) = exp(2 pi i sum_j g_j k_j / q_j) as an exact root of unity.
inline CycloSum character_value(const FinAbGroup& G, const GroupElement& chi,
                                const GroupElement& k) {
  int64_t M = group_exponent(G);
  int64_t t = 0;
  for (size_t j = 0; j < G.slot_count(); ++j)
    t = (t + (M / G.summands[j]) % M * ((chi[j] * k[j]) % G.summands[j])) % M;
  return CycloSum::root((int)M, (long)t);
}

// l_chi(k): average of chi over the <v>-orbit of k -- equivalently the
// average of the dual-orbit of chi evaluated at k (both equal the Haar
// integral over the cyclic group generated by v).
inline CycloSum orbit_average_l(const FinAbGroup& G, const MonomialAut& v,
                                const GroupElement& chi, const GroupElement& k) {
  auto orb = orbit(G, v, k);
  CycloSum acc((int)group_exponent(G));
  for (const auto& q : orb) acc += character_value(G, chi, q);
  acc *= Rat(1, (Int)orb.size());
  return acc;
}

// ----- metabelian extension group Z = D |x K -----

struct MetabelianGroup {
  int64_t d_order = 1;  // D = Z/d_order, generated by v
  FinAbGroup K;
  MonomialAut v;  // action of the D-generator on K

  std::vector<MonomialAut> vpow;  // v^0 .. v^{d_order-1}, filled by validate
};

struct ZElem {
  int64_t d = 0;
  GroupElement k;
  friend bool operator==(const ZElem&, const ZElem&) = default;
};

inline void validate_metabelian(MetabelianGroup& Z) {
  if (Z.d_order < 1) throw structural_error("d_order must be >= 1");
  validate_group(Z.K);
  validate_aut(Z.K, Z.v);
  Z.vpow.clear();
  Z.vpow.push_back(identity_aut(Z.K));
  for (int64_t i = 1; i < Z.d_order; ++i)
    Z.vpow.push_back(compose(Z.K, Z.v, Z.vpow.back()));
  auto full = compose(Z.K, Z.v, Z.vpow.back());
  if (!aut_equal(full, Z.vpow[0]))
    throw structural_error("action order does not divide d_order");
}

inline ZElem z_id(const MetabelianGroup& Z) { return {0, zero(Z.K)}; }

inline ZElem z_mul(const MetabelianGroup& Z, const ZElem& a, const ZElem& b) {
  // (d, k)(d', k') = (d + d', k + v^d k')
  ZElem out;
  out.d = (a.d + b.d) % Z.d_order;
  out.k = add(Z.K, a.k, apply(Z.K, Z.vpow[(size_t)a.d], b.k));
  return out;
}

inline ZElem z_inv(const MetabelianGroup& Z, const ZElem& a) {
  ZElem out;
  out.d = (Z.d_order - a.d) % Z.d_order;
  out.k = neg(Z.K, apply(Z.K, Z.vpow[(size_t)out.d], a.k));
  return out;
}

}  // namespace sml::algebra

#pragma once

// Realizability planner: maps a target multiplicity set to the theorem
// that realizes it, with the route-specific payload (realization triple,
// diamond factors, scale factor, or double-coset data).

#include "sml/algebra.hpp"
#include "sml/base.hpp"
#include "sml/mset.hpp"
#include "sml/permgroup.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sml::planner {

using std::int64_t;
using mset::MSet;

struct Plan {
  enum Route {
    thm21,           // 1 in E
    thm41,           // 2 in E
    thm54,           // diamond of singletons
    thm57,           // n * E' with 1 in E'
    cor55,           // semigroup
    thm35_63,        // double-coset set of a Cartesian power
    thm67,           // singleton, mixing
    thm71_infinite,  // infinite-measure fallback
    open_question
  } route = open_question;

  std::optional<algebra::Realization> realization;  // Thm 2.1 triple
  std::vector<Int> realized_set;                    // the set that triple realizes
  std::vector<Int> factors;                         // Thm 5.4 singleton factors
  Int scale_factor = 0;                             // Thm 5.7
  MSet inner;                                       // Thm 5.7 E'
  int64_t power_n = 0;                              // Thm 3.5 degree
  std::string subgroup_name;                        // Thm 3.5 catalog tag
  permgroup::PermGroupSpec subgroup;                // Thm 3.5 Gamma
  std::vector<std::string> caveats;
};

inline const char* route_name(Plan::Route r) {
  switch (r) {
    case Plan::thm21: return "Thm2.1";
    case Plan::thm41: return "Thm4.1";
    case Plan::thm54: return "Thm5.4";
    case Plan::thm57: return "Thm5.7";
    case Plan::cor55: return "Cor5.5";
    case Plan::thm35_63: return "Thm3.5/6.3";
    case Plan::thm67: return "Thm6.7";
    case Plan::thm71_infinite: return "Thm7.1-infinite";
    case Plan::open_question: return "open";
  }
  return "?";
}

namespace detail {

// Exhaustive diamond-decomposition search: nondecreasing singleton factors
// drawn from E itself, length 2..6, pruned by partial-result containment.
inline bool diamond_split(const MSet& E, std::vector<Int>& acc, const MSet& cur,
                          size_t from) {
  if (acc.size() >= 2 && cur.elements == E.elements) return true;
  if (acc.size() >= 6) return false;
  for (size_t i = from; i < E.elements.size(); ++i) {
    const Int& p = E.elements[i];
    if (p < 2) continue;
    MSet next = mset::diamond(cur, mset::make_mset({p}));
    if (!std::includes(E.elements.begin(), E.elements.end(),
                       next.elements.begin(), next.elements.end()))
      continue;
    acc.push_back(p);
    if (diamond_split(E, acc, next, i)) return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace detail

inline Plan plan(const MSet& E) {
  mset::validate_mset(E);
  Plan out;

  if (!E.has_infinity && E.tail.kind == mset::Tail::none) {
    if (mset::contains(E, 1)) {
      out.route = Plan::thm21;
      std::set<int64_t> target;
      for (const auto& x : E.elements)
        if (x != 1 || E.elements.size() == 1)
          target.insert(x.convert_to<int64_t>());
      for (auto v : target) out.realized_set.push_back(Int(v));
      if (E.elements.size() > 1)
        out.caveats.push_back(
            "E contains 1; the triple realizes E \\ {1} and Thm 2.1 adjoins 1");
      try {
        out.realization = algebra::realize_finite(target);
      } catch (const guard_error&) {
        out.caveats.push_back("realization triple omitted: slot guard exceeded");
      }
      return out;
    }

    if (E.elements.size() == 1) {
      out.route = Plan::thm67;
      out.caveats.push_back("realized by a mixing transformation");
      return out;
    }

    {
      std::vector<Int> acc;
      MSet empty;
      if (detail::diamond_split(E, acc, empty, 0)) {
        out.route = Plan::thm54;
        out.factors = acc;
        // re-verify the decomposition
        MSet check;
        for (const auto& p : acc) check = mset::diamond(check, mset::make_mset({p}));
        if (check.elements != E.elements)
          throw structural_error("diamond decomposition failed verification");
        return out;
      }
    }

    if (mset::contains(E, 2)) {
      out.route = Plan::thm41;
      return out;
    }

    {
      auto [g, inner] = mset::factor_scale(E);
      if (g > 1 && mset::contains(inner, 1)) {
        out.route = Plan::thm57;
        out.scale_factor = g;
        out.inner = inner;
        return out;
      }
    }

    // double-coset sets of Cartesian powers, degree <= 6
    for (int64_t n = 2; n <= 6; ++n) {
      if (n <= 5) {
        auto subs = permgroup::all_subgroups(n);
        for (size_t i = 0; i < subs.size(); ++i) {
          permgroup::PermGroupSpec spec;
          spec.n = n;
          spec.generators = subs[i];
          if (mset::power_multiplicities(n, spec).elements == E.elements) {
            out.route = Plan::thm35_63;
            out.power_n = n;
            out.subgroup = spec;
            out.subgroup_name = "subgroup of S_" + std::to_string(n) +
                                " of order " + std::to_string(subs[i].size());
            return out;
          }
        }
      } else {
        for (const auto& named : permgroup::catalog_degree6()) {
          if (mset::power_multiplicities(n, named.spec).elements == E.elements) {
            out.route = Plan::thm35_63;
            out.power_n = n;
            out.subgroup = named.spec;
            out.subgroup_name = named.name;
            return out;
          }
        }
      }
    }

    out.route = Plan::thm71_infinite;
    out.caveats.push_back("probability-preserving case open");
    return out;
  }

  // infinite families: semigroups realize via Cor 5.5, everything else
  // falls back to the infinite-measure theorem
  if (E.elements.empty()) {
    // nothing materialized; trust semigroup-flavored generator tags only
    if (E.tail.kind == mset::Tail::pow ||
        E.tail.kind == mset::Tail::semigroup_mul) {
      out.route = Plan::cor55;
      out.caveats.push_back(
          "Gaussian realizations obey the simple-or-infinite dichotomy");
      return out;
    }
    if (E.tail.kind == mset::Tail::semigroup_add) {
      out.route = Plan::cor55;
      out.caveats.push_back(
          "additive subsemigroups are multiplicative subsemigroups");
      return out;
    }
  } else {
    const Int& top = E.elements.back();
    if (mset::closed_under(E, mset::SemigroupOp::mul, top)) {
      out.route = Plan::cor55;
      out.caveats.push_back(
          "Gaussian realizations obey the simple-or-infinite dichotomy");
      return out;
    }
    if (mset::closed_under(E, mset::SemigroupOp::add, top)) {
      out.route = Plan::cor55;
      out.caveats.push_back(
          "additive subsemigroups are multiplicative subsemigroups");
      return out;
    }
  }
  out.route = Plan::thm71_infinite;
  out.caveats.push_back("infinite family outside the semigroup catalog");
  out.caveats.push_back("probability-preserving case open");
  return out;
}

}  // namespace sml::planner

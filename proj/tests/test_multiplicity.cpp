#include <catch2/catch_amalgamated.hpp>

#include <sml/planner.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace sml;
using namespace sml::mset;
using namespace sml::permgroup;

// ---------------------------------------------------------------------------
// Oracles: plain std::set arithmetic and full-product double-coset marking,
// sharing no search code with the library.
// ---------------------------------------------------------------------------

namespace {

std::set<long long> oracle_diamond(const std::set<long long>& a,
                                   const std::set<long long>& b) {
  std::set<long long> out(a.begin(), a.end());
  out.insert(b.begin(), b.end());
  for (auto x : a)
    for (auto y : b) out.insert(x * y);
  return out;
}

std::vector<Perm> oracle_group(std::vector<Perm> elems, int64_t n) {
  elems.push_back(identity_perm(n));
  bool grew = true;
  while (grew) {
    grew = false;
    auto cur = elems;
    for (const auto& a : cur)
      for (const auto& b : cur) {
        auto c = compose(a, b);
        if (std::find(elems.begin(), elems.end(), c) == elems.end()) {
          elems.push_back(c);
          grew = true;
        }
      }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

// mark whole double cosets Gamma s S_k by the full triple product
long long oracle_double_cosets(const std::vector<Perm>& Gfull, int64_t n,
                               int64_t k) {
  auto all = symmetric_group(n);
  std::vector<Perm> Sk;
  for (const auto& p : all)
    if (fixes_from(p, k)) Sk.push_back(p);
  std::set<Perm> left(all.begin(), all.end());
  long long count = 0;
  while (!left.empty()) {
    ++count;
    Perm s = *left.begin();
    for (const auto& g : Gfull)
      for (const auto& t : Sk) left.erase(compose(compose(g, s), t));
  }
  return count;
}

MSet ms(std::vector<long long> xs) {
  std::vector<Int> v;
  for (auto x : xs) v.push_back(Int(x));
  return make_mset(std::move(v));
}

std::vector<long long> to_ll(const MSet& e) {
  std::vector<long long> out;
  for (const auto& x : e.elements) out.push_back(x.convert_to<long long>());
  return out;
}

}  // namespace

TEST_CASE("diamond reproduces the catalog sets") {
  REQUIRE(to_ll(diamond(ms({2}), ms({3}))) == std::vector<long long>{2, 3, 6});
  REQUIRE(to_ll(diamond(diamond(ms({2}), ms({3})), ms({5}))) ==
          std::vector<long long>{2, 3, 5, 6, 10, 15, 30});

  MSet empty;
  REQUIRE(to_ll(diamond(ms({4, 9}), empty)) == std::vector<long long>{4, 9});
  REQUIRE(to_ll(diamond(empty, ms({4, 9}))) == std::vector<long long>{4, 9});
}

TEST_CASE("diamond agrees with the set oracle and its laws") {
  std::vector<std::set<long long>> pool = {
      {2}, {3}, {2, 3, 6}, {1}, {5, 7}, {2, 4}, {1, 2, 3}, {10}};
  for (const auto& a : pool)
    for (const auto& b : pool) {
      MSet A = ms({a.begin(), a.end()}), B = ms({b.begin(), b.end()});
      auto got = to_ll(diamond(A, B));
      auto want = oracle_diamond(a, b);
      REQUIRE(got == std::vector<long long>(want.begin(), want.end()));
      // commutative
      REQUIRE(to_ll(diamond(B, A)) == got);
      // E subset of E <> F
      for (auto x : a) REQUIRE(std::count(got.begin(), got.end(), x) == 1);
      // associative
      for (const auto& c : pool) {
        MSet C = ms({c.begin(), c.end()});
        REQUIRE(to_ll(diamond(diamond(A, B), C)) ==
                to_ll(diamond(A, diamond(B, C))));
      }
    }
  REQUIRE(to_ll(diamond(ms({1}), ms({1}))) == std::vector<long long>{1});
}

TEST_CASE("scale and factor_scale round trip") {
  REQUIRE(to_ll(scale(Int(2), ms({1, 3}))) == std::vector<long long>{2, 6});
  auto [g, inner] = factor_scale(ms({2, 6}));
  REQUIRE(g == 2);
  REQUIRE(to_ll(inner) == std::vector<long long>{1, 3});

  auto [g2, inner2] = factor_scale(ms({5, 7}));
  REQUIRE(g2 == 1);
  REQUIRE(to_ll(inner2) == std::vector<long long>{5, 7});

  std::vector<std::vector<long long>> rounds = {{4, 6, 10}, {3, 9}, {12}};
  for (const auto& xs : rounds) {
    auto e = ms(xs);
    auto [f, in] = factor_scale(e);
    REQUIRE(to_ll(scale(f, in)) == to_ll(e));
  }
}

TEST_CASE("semigroup closures") {
  auto pw = semigroup_closure({Int(2)}, SemigroupOp::mul, Int(16));
  REQUIRE(to_ll(pw) == std::vector<long long>{2, 4, 8, 16});
  REQUIRE(pw.has_infinity);
  REQUIRE(pw.tail.str() == "mulsg(2)");

  auto num = semigroup_closure({Int(3), Int(5)}, SemigroupOp::add, Int(20));
  std::vector<long long> want;
  for (long long x = 3; x <= 20; ++x)
    if (x != 4 && x != 7) want.push_back(x);
  REQUIRE(to_ll(num) == want);

  REQUIRE_THROWS_AS(semigroup_closure({}, SemigroupOp::mul, Int(5)),
                    structural_error);
  REQUIRE_THROWS_AS(semigroup_closure({Int(9)}, SemigroupOp::mul, Int(5)),
                    structural_error);
}

TEST_CASE("additively closed sets are multiplicatively closed in range") {
  std::vector<std::vector<Int>> pools = {{Int(3), Int(5)},
                                         {Int(2), Int(7)},
                                         {Int(4), Int(6), Int(9)}};
  for (const auto& gens : pools) {
    auto s = semigroup_closure(gens, SemigroupOp::add, Int(60));
    REQUIRE(closed_under(s, SemigroupOp::add, Int(60)));
    REQUIRE(closed_under(s, SemigroupOp::mul, Int(60)));
  }
}

TEST_CASE("subgroup enumeration counts for small symmetric groups") {
  REQUIRE(all_subgroups(1).size() == 1);
  REQUIRE(all_subgroups(2).size() == 2);
  REQUIRE(all_subgroups(3).size() == 6);
  REQUIRE(all_subgroups(4).size() == 30);
  REQUIRE(all_subgroups(5).size() == 156);
  REQUIRE_THROWS_AS(all_subgroups(6), structural_error);
}

TEST_CASE("degree-6 catalog entries have the advertised orders") {
  std::map<std::string, size_t> want = {
      {"trivial", 1},  {"C2", 2},       {"C2x", 2},     {"C2xxx", 2},
      {"C3", 3},       {"C3x", 3},      {"C4", 4},      {"C5", 5},
      {"C6", 6},       {"V4", 4},       {"S2xS2xS2", 8}, {"S3", 6},
      {"S3xS3", 36},   {"D6", 12},      {"S4", 24},     {"S4xS2", 48},
      {"A5", 60},      {"S5", 120},     {"S5-transitive", 120},
      {"A6", 360},     {"S6", 720}};
  auto cat = catalog_degree6();
  REQUIRE(cat.size() == want.size());
  for (const auto& ns : cat) {
    REQUIRE(want.count(ns.name) == 1);
    REQUIRE(closure(ns.spec.generators, 6).size() == want[ns.name]);
  }
  // the transitive S_5 moves every point; the Young S_5 fixes one
  auto trans = closure(cat[18].spec.generators, 6);
  bool moves5 = false;
  for (const auto& p : trans) moves5 |= p[5] != 5;
  REQUIRE(cat[18].name == "S5-transitive");
  REQUIRE(moves5);
}

TEST_CASE("double-coset counts: frozen values and the factorial law") {
  PermGroupSpec triv;
  triv.n = 3;
  REQUIRE(double_coset_count(triv, 3, 1) == 6);
  REQUIRE(double_coset_count(triv, 3, 2) == 3);

  PermGroupSpec s2in3;
  s2in3.n = 3;
  s2in3.generators = {from_cycles(3, {{0, 1}})};
  REQUIRE(double_coset_count(s2in3, 3, 2) == 2);

  for (int64_t n = 2; n <= 5; ++n) {
    PermGroupSpec t;
    t.n = n;
    long long nf = 1, kf = 1;
    for (int64_t i = 2; i <= n; ++i) nf *= i;
    for (int64_t k = 1; k <= n; ++k) {
      if (k > 1) kf *= k;
      REQUIRE(double_coset_count(t, n, k) == nf / kf);
    }
  }

  PermGroupSpec bad;
  bad.n = 4;
  REQUIRE_THROWS_AS(double_coset_count(bad, 5, 1), structural_error);
  REQUIRE_THROWS_AS(double_coset_count(bad, 4, 0), structural_error);
}

TEST_CASE("double-coset counts agree with the full-product oracle") {
  for (int64_t n = 3; n <= 4; ++n)
    for (const auto& H : all_subgroups(n)) {
      PermGroupSpec spec;
      spec.n = n;
      spec.generators = H;
      auto Gfull = oracle_group(H, n);
      for (int64_t k = 1; k <= n; ++k)
        REQUIRE(double_coset_count(spec, n, k) ==
                oracle_double_cosets(Gfull, n, k));
    }
}

TEST_CASE("power multiplicity sets") {
  REQUIRE(to_ll(power_multiplicities(2)) == std::vector<long long>{2});
  REQUIRE(to_ll(power_multiplicities(3)) == std::vector<long long>{3, 6});
  REQUIRE(to_ll(power_multiplicities(4)) == std::vector<long long>{4, 12, 24});
  REQUIRE(to_ll(power_multiplicities(5)) ==
          std::vector<long long>{5, 20, 60, 120});

  // M(T^{x n}/S_{n-1}) = {2, ..., n}
  PermGroupSpec s3in4;
  s3in4.n = 4;
  s3in4.generators = {from_cycles(4, {{0, 1}}), from_cycles(4, {{0, 1, 2}})};
  REQUIRE(to_ll(power_multiplicities(4, s3in4)) ==
          std::vector<long long>{2, 3, 4});

  PermGroupSpec s5in6;
  s5in6.n = 6;
  s5in6.generators = {from_cycles(6, {{0, 1}}),
                      from_cycles(6, {{0, 1, 2, 3, 4}})};
  REQUIRE(to_ll(power_multiplicities(6, s5in6)) ==
          std::vector<long long>{2, 3, 4, 5, 6});
}

TEST_CASE("poisson families") {
  auto e82 = poisson_example82(5);
  REQUIRE(to_ll(e82) == std::vector<long long>{1, 3, 15, 105, 945});
  REQUIRE(e82.has_infinity);

  std::vector<Perm> s2 = {from_cycles(2, {{0, 1}})};
  auto a22 = poisson_amk(2, 2, 3, s2);
  REQUIRE(to_ll(a22) == std::vector<long long>{1, 3, 15});

  // A(2,2) is example 8.2 termwise
  auto owed = poisson_example82(8);
  auto got = poisson_amk(2, 2, 8, s2);
  REQUIRE(got.elements == owed.elements);

  // independent factorial evaluation of A(3,6)
  std::vector<Perm> s3 = {from_cycles(3, {{0, 1}}), from_cycles(3, {{0, 1, 2}})};
  auto a36 = poisson_amk(3, 6, 3, s3);
  std::vector<Int> want;
  for (int64_t n = 1; n <= 3; ++n) {
    Int num = 1, den = 1;
    for (int64_t i = 2; i <= 3 * n; ++i) num *= i;
    for (int64_t i = 2; i <= n; ++i) den *= i;
    Int kp = 1;
    for (int64_t i = 0; i < n; ++i) kp *= 6;
    want.push_back(num / (kp * den));
  }
  std::sort(want.begin(), want.end());
  REQUIRE(a36.elements == want);
  REQUIRE(to_ll(a36) == std::vector<long long>{1, 10, 280});

  REQUIRE(to_ll(poisson_exp_p(Int(2), 3)) == std::vector<long long>{2, 4, 8});
  REQUIRE(poisson_exp_p(Int(2), 3).tail.str() == "pow(2)");

  // good-pair discipline
  REQUIRE_THROWS_AS(poisson_amk(2, 2, 3, {}), structural_error);
  REQUIRE_THROWS_AS(poisson_amk(3, 4, 3, s3), structural_error);
}

TEST_CASE("planner routes the catalog examples") {
  auto p1 = planner::plan(ms({1, 5}));
  REQUIRE(p1.route == planner::Plan::thm21);
  REQUIRE(p1.realization.has_value());
  REQUIRE(to_ll(make_mset(p1.realized_set)) == std::vector<long long>{5});
  // round trip: the emitted triple really has L = {5}
  auto L = algebra::multiplicity_set_L(p1.realization->G, p1.realization->v,
                                       p1.realization->support);
  REQUIRE(L == std::set<int64_t>{5});

  auto p2 = planner::plan(ms({2, 3, 6}));
  REQUIRE(p2.route == planner::Plan::thm54);
  REQUIRE(to_ll(make_mset(p2.factors)) == std::vector<long long>{2, 3});

  auto p3 = planner::plan(ms({3, 4}));
  REQUIRE(p3.route == planner::Plan::thm71_infinite);
  REQUIRE(p3.caveats.size() == 1);
  REQUIRE(p3.caveats[0].find("open") != std::string::npos);
}

TEST_CASE("planner covers the remaining finite routes") {
  REQUIRE(planner::plan(ms({7})).route == planner::Plan::thm67);
  REQUIRE(planner::plan(ms({2, 5})).route == planner::Plan::thm41);

  auto p57 = planner::plan(ms({3, 6}));
  REQUIRE(p57.route == planner::Plan::thm57);
  REQUIRE(p57.scale_factor == 3);
  REQUIRE(to_ll(p57.inner) == std::vector<long long>{1, 2});

  // {3, 7, 12} = the double cosets of S_2 x 1 x 1 in S_4
  auto p35 = planner::plan(ms({3, 7, 12}));
  REQUIRE(p35.route == planner::Plan::thm35_63);
  REQUIRE(p35.power_n == 4);
  auto back = power_multiplicities(p35.power_n, p35.subgroup);
  REQUIRE(to_ll(back) == std::vector<long long>{3, 7, 12});

  auto p54 = planner::plan(ms({2, 4}));
  REQUIRE(p54.route == planner::Plan::thm54);
  REQUIRE(to_ll(make_mset(p54.factors)) == std::vector<long long>{2});

  auto single1 = planner::plan(ms({1}));
  REQUIRE(single1.route == planner::Plan::thm21);
  REQUIRE(single1.realization.has_value());
}

TEST_CASE("planner handles infinite families") {
  auto sg = planner::plan(semigroup_closure({Int(2)}, SemigroupOp::mul, Int(64)));
  REQUIRE(sg.route == planner::Plan::cor55);

  auto add = planner::plan(semigroup_closure({Int(3), Int(5)}, SemigroupOp::add,
                                             Int(30)));
  REQUIRE(add.route == planner::Plan::cor55);

  auto e82 = planner::plan(poisson_example82(5));
  REQUIRE(e82.route == planner::Plan::thm71_infinite);

  auto pw = planner::plan(poisson_exp_p(Int(3), 5));
  REQUIRE(pw.route == planner::Plan::cor55);
}

TEST_CASE("planner is total over assorted small sets") {
  std::vector<std::vector<long long>> sets = {
      {1},       {2},          {3},       {1, 2},    {1, 6},    {2, 3},
      {3, 5},    {2, 3, 6},    {3, 4},    {4, 9},    {5, 25},   {2, 6},
      {3, 6},    {3, 12, 36},  {3, 7, 12}, {6, 10, 15}, {1, 2, 3, 4},
      {5, 7, 35}, {4, 5, 20}, {9, 11}};
  for (const auto& xs : sets) {
    auto p = planner::plan(ms(xs));
    REQUIRE(std::string(planner::route_name(p.route)) != "open");
  }
  REQUIRE_THROWS_AS(planner::plan(MSet{}), structural_error);
}

TEST_CASE("mset validation") {
  REQUIRE_THROWS_AS(validate_mset(MSet{}), structural_error);
  MSet bad;
  bad.elements = {Int(0), Int(2)};
  REQUIRE_THROWS_AS(validate_mset(bad), structural_error);
  MSet dup;
  dup.elements = {Int(2), Int(2)};
  REQUIRE_THROWS_AS(validate_mset(dup), structural_error);
  REQUIRE_NOTHROW(validate_mset(poisson_exp_p(Int(2), 4)));
}

// Acceptance gate.  Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero when any criterion fails.  argv[1] is the CLI binary,
// argv[2] the sample-spec directory (both used by the determinism criterion).

#include <sml/serialize.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sml;

namespace {

int failures = 0;

struct Criterion {
  int index;
  std::string label;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;

  Criterion(int i, std::string l) : index(i), label(std::move(l)) {}

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }

  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }

  ~Criterion() {
    char line[512];
    std::snprintf(line, sizeof line, "criterion %2d: %s  %s (%.1fs)%s%s", index,
                  ok ? "PASS" : "FAIL", label.c_str(), seconds(),
                  detail.empty() ? "" : " -- ", detail.c_str());
    std::cout << line << "\n";
    if (!ok) ++failures;
  }
};

std::string join_ints(const std::vector<int64_t>& xs) {
  std::string s;
  for (auto x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

// ----- 1: realization round trip over every nonempty subset of {1..6} -----

void criterion1() {
  Criterion c(1, "realization round trip for all nonempty subsets of {1..6}");
  int count = 0;
  for (int mask = 1; mask < 64 && c.ok; ++mask) {
    std::set<int64_t> E;
    for (int b = 0; b < 6; ++b)
      if (mask & (1 << b)) E.insert(b + 1);
    try {
      auto R = algebra::realize_finite(E);
      auto L = algebra::multiplicity_set_L(R.G, R.v, R.support);
      if (L != E) {
        c.fail("L mismatch for mask " + std::to_string(mask));
        break;
      }
      ++count;
    } catch (const std::exception& e) {
      c.fail("mask " + std::to_string(mask) + ": " + e.what());
    }
  }
  c.expect(count >= 40, "fewer than 40 sets realized");
  c.expect(c.seconds() < 60.0, "runtime exceeded 60s");
}

// ----- 2: L(G, v) is lcm-closed on 200 randomized monomial pairs -----

void criterion2() {
  Criterion c(2, "lcm-closure of L(G, v) on 200 randomized monomial pairs");
  std::mt19937 rng(20260822);
  const int64_t moduli_pool[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27};
  int done = 0;
  while (done < 200 && c.ok) {
    algebra::FinAbGroup G;
    int64_t order = 1;
    size_t slots = 1 + rng() % 4;
    for (size_t j = 0; j < slots; ++j) {
      int64_t q = moduli_pool[rng() % std::size(moduli_pool)];
      if (order * q > 10000) break;
      order *= q;
      G.summands.push_back(q);
    }
    if (G.summands.empty()) continue;

    // permute only within equal-modulus classes, pick random units
    algebra::MonomialAut v;
    v.perm.resize(G.summands.size());
    v.units.resize(G.summands.size());
    std::map<int64_t, std::vector<size_t>> classes;
    for (size_t j = 0; j < G.summands.size(); ++j)
      classes[G.summands[j]].push_back(j);
    for (auto& [q, ix] : classes) {
      auto shuffled = ix;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (size_t t = 0; t < ix.size(); ++t) v.perm[ix[t]] = shuffled[t];
    }
    for (size_t j = 0; j < G.summands.size(); ++j) {
      int64_t u;
      do {
        u = 1 + (int64_t)(rng() % (uint64_t)G.summands[j]);
      } while (std::gcd(u, G.summands[j]) != 1);
      v.units[j] = u;
    }

    try {
      auto L = algebra::multiplicity_set_L(G, v, int64_t(10000));
      for (auto a : L)
        for (auto b : L)
          if (!L.count(std::lcm(a, b))) {
            c.fail("lcm(" + std::to_string(a) + "," + std::to_string(b) +
                   ") missing from L, trial " + std::to_string(done));
            break;
          }
      ++done;
    } catch (const std::exception& e) {
      c.fail(std::string("trial ") + std::to_string(done) + ": " + e.what());
    }
  }
}

// ----- 3: weak limits for spacer cases i, ii, iv with r_n = n + 1 -----

rankone::TowerConstruction growing_tail(rankone::TailRule::Kind kind,
                                        Rat base_width = Rat(1)) {
  rankone::TowerConstruction c;
  c.tail.kind = kind;
  c.tail.r = rankone::parse_rrule("n+1");
  c.base_width = base_width;
  if (kind == rankone::TailRule::custom) c.tail.s_cycle = {1};
  return c;
}

void criterion3() {
  Criterion c(3, "certified weak limits, cases i/ii/iv, p in {1,2}");
  // a narrow base keeps the finite-stage deviation of the mixed case under
  // the absolute tolerance at the first admissible stage
  const Rat bw(1, 4);
  struct Case {
    rankone::LimitCase kase;
    rankone::TowerConstruction cons;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({rankone::LimitCase::i,
                   growing_tail(rankone::TailRule::zero_spacer, bw), "i"});
  cases.push_back({rankone::LimitCase::ii,
                   growing_tail(rankone::TailRule::custom, bw), "ii"});
  cases.push_back({rankone::LimitCase::iv,
                   growing_tail(rankone::TailRule::half_spacer, bw), "iv"});
  rankone::LevelSet A{3, {0, 1, 3}};
  for (const auto& [kase, cons, name] : cases) {
    for (int64_t p : {1, 2}) {
      auto t0 = std::chrono::steady_clock::now();
      try {
        auto r = rankone::weak_limit_check(cons, kase, p, A, A, Rat(1, 50), 40);
        c.expect(r.pass, std::string("case ") + name + " p=" +
                             std::to_string(p) + " did not certify");
        c.expect(r.h_n >= 10000,
                 std::string("case ") + name + " certified below height 1e4");
        c.expect(r.stages_tried == 1,
                 std::string("case ") + name + " p=" + std::to_string(p) +
                     " needed more than the first admissible stage");
      } catch (const std::exception& e) {
        c.fail(std::string("case ") + name + " p=" + std::to_string(p) + ": " +
               e.what());
      }
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      c.expect(dt < 10.0, std::string("case ") + name + " exceeded 10s");
    }
  }
}

// ----- 4: exact heights of the named constructions -----

void criterion4() {
  Criterion c(4, "exact heights: three-cut, doubling-with-one-spacer, doubling");
  rankone::TowerConstruction chacon;
  chacon.tail.kind = rankone::TailRule::chacon;
  std::vector<Int> want_chacon = {Int(1), Int(4), Int(13), Int(40), Int(121)};
  c.expect(rankone::heights(chacon, 5) == want_chacon, "three-cut heights differ");

  rankone::TowerConstruction djr;
  djr.tail.kind = rankone::TailRule::djr;
  std::vector<Int> want_djr = {Int(1), Int(5), Int(41)};
  c.expect(rankone::heights(djr, 3) == want_djr,
           "doubling-with-one-spacer heights differ");

  rankone::TowerConstruction dz;
  dz.tail.kind = rankone::TailRule::zero_spacer;
  dz.tail.r = rankone::parse_rrule("2");
  std::vector<Int> want_dz = {Int(1), Int(2), Int(4), Int(8), Int(16)};
  c.expect(rankone::heights(dz, 5) == want_dz, "doubling heights differ");
}

// ----- 5: cocycle limits over the order-3 fiber -----

void criterion5() {
  Criterion c(5, "cocycle limits over Z/3: difference law, orbit average, trivial character");
  algebra::MetabelianGroup z3;
  z3.d_order = 2;
  z3.K.summands = {3};
  z3.v.perm = {0};
  z3.v.units = {2};
  algebra::validate_metabelian(z3);

  cocycle::Directive d;
  d.kind = cocycle::Directive::claim28;
  d.k = {1};
  auto pc = cocycle::build_schedule(z3, {d}, rankone::parse_rrule("n+1"), 12);
  rankone::LevelSet A{3, {0, 1, 2}};

  try {
    auto r26 = cocycle::verify_weak_limit_cocycle(
        pc, cocycle::VerifyMode::lemma26, {{1}, {2}}, {1}, A, A, Rat(1, 20), 40);
    c.expect(r26.pass && r26.h_n >= 10000, "difference law did not certify");
    Rat q;
    c.expect(r26.exact_prediction && r26.prediction.rational_value(&q) &&
                 q == Rat(-1, 4),
             "difference-law prediction is not -1/4");

    auto r28 = cocycle::verify_weak_limit_cocycle(
        pc, cocycle::VerifyMode::claim28, {{1}}, {1}, A, A, Rat(1, 20), 40);
    c.expect(r28.pass && r28.h_n >= 10000, "orbit-average claim did not certify");
    c.expect(r28.exact_prediction && r28.prediction.rational_value(&q) &&
                 q == Rat(-1, 4),
             "orbit-average prediction is not (-1/2) * mu(A)");

    // trivial character: the twisted limit collapses to the plain case-i
    // limit of the matching zero-spacer tower
    auto r0 = cocycle::verify_weak_limit_cocycle(
        pc, cocycle::VerifyMode::claim28, {{1}}, {0}, A, A, Rat(1, 50), 40);
    auto ri = rankone::weak_limit_check(
        growing_tail(rankone::TailRule::zero_spacer), rankone::LimitCase::i, 1,
        A, A, Rat(1, 50), 40);
    c.expect(r0.pass && ri.pass, "trivial-character reduction did not certify");
    c.expect(r0.exact_prediction && r0.prediction.rational_value(&q) &&
                 q == ri.prediction,
             "trivial-character prediction differs from the case-i limit");
  } catch (const std::exception& e) {
    c.fail(e.what());
  }
}

// ----- 6: power multiplicities and double-coset agreement -----

void criterion6() {
  Criterion c(6, "power multiplicities, coset-count agreement, quotient powers");
  for (int64_t n = 2; n <= 5; ++n) {
    // n!/k! for k = 0..n-1
    std::vector<Int> expect;
    for (int64_t k = 0; k < n; ++k) {
      Int v = 1;
      for (int64_t t = k + 1; t <= n; ++t) v *= t;
      expect.push_back(v);
    }
    std::sort(expect.begin(), expect.end());
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    auto got = mset::power_multiplicities(n);
    c.expect(got.elements == expect,
             "factorial law fails at n=" + std::to_string(n));
  }

  // enumeration vs averaging agreement is asserted inside double_coset_count
  for (int64_t n = 2; n <= 5; ++n) {
    auto subs = permgroup::all_subgroups(n);
    for (const auto& gens_full : subs) {
      permgroup::PermGroupSpec spec;
      spec.n = n;
      spec.generators = gens_full;
      for (int64_t k = 1; k <= n; ++k) {
        try {
          (void)permgroup::double_coset_count(spec, n, k);
        } catch (const std::exception& e) {
          c.fail("coset count disagreement at n=" + std::to_string(n) +
                 " k=" + std::to_string(k) + ": " + e.what());
        }
      }
    }
  }

  // quotient by the point-stabilizer copy of the next-smaller full group
  for (int64_t n = 2; n <= 6; ++n) {
    permgroup::PermGroupSpec stab;
    stab.n = n;
    for (int64_t j = 0; j + 2 < n; ++j) {
      permgroup::Perm p(static_cast<size_t>(n));
      for (int64_t t = 0; t < n; ++t) p[(size_t)t] = (uint8_t)t;
      std::swap(p[(size_t)j], p[(size_t)j + 1]);
      stab.generators.push_back(p);
    }
    auto got = mset::power_multiplicities(n, stab);
    std::vector<Int> want;
    for (int64_t t = 2; t <= n; ++t) want.push_back(Int(t));
    c.expect(got.elements == want,
             "quotient power set differs at n=" + std::to_string(n));
  }
}

// ----- 7: the three Poisson families -----

void criterion7() {
  Criterion c(7, "Poisson families: odd products, A(2,2), powers of two");
  auto odd = mset::poisson_example82(5);
  std::vector<Int> want = {Int(1), Int(3), Int(15), Int(105), Int(945)};
  c.expect(odd.elements == want, "odd-product terms differ");

  std::vector<permgroup::Perm> swap2 = {{1, 0}};
  for (int64_t terms = 1; terms <= 6; ++terms) {
    auto a22 = mset::poisson_amk(2, 2, terms, swap2);
    auto e82 = mset::poisson_example82(terms);
    c.expect(a22.elements == e82.elements,
             "A(2,2) differs at " + std::to_string(terms) + " terms");
  }

  auto p2 = mset::poisson_exp_p(Int(2), 6);
  std::vector<Int> want2 = {Int(2), Int(4), Int(8), Int(16), Int(32), Int(64)};
  c.expect(p2.elements == want2 && p2.tail.str() == "pow(2)",
           "power-of-two family differs");
}

// ----- 8: formal-spectrum counting identities -----

void criterion8() {
  Criterion c(8, "formal-spectrum identities: ratio, singleton, grading, homogeneity");
  specoracle::FormalSpectrum spec;
  for (int i = 0; i < 6; ++i) spec.symbols.push_back("x" + std::to_string(i));

  try {
    // ratio law (asserted internally) over n = 1..4
    for (int64_t n = 1; n <= 4; ++n) (void)specoracle::tensor_vs_sym(spec, n);

    // singleton law for every subgroup, n = 2..4
    for (int64_t n = 2; n <= 4; ++n) {
      for (const auto& gens_full : permgroup::all_subgroups(n)) {
        permgroup::PermGroupSpec gamma;
        gamma.n = n;
        gamma.generators = gens_full;
        auto got = specoracle::invariant_power_mset(spec, n, gamma);
        Int order = (Int)gens_full.size();
        Int fact = 1;
        for (int64_t t = 2; t <= n; ++t) fact *= t;
        c.expect(got.elements == std::vector<Int>{fact / order},
                 "singleton law fails at n=" + std::to_string(n));
      }
    }

    // graded multiplicities against coset counts (asserted internally)
    for (int64_t n = 2; n <= 5; ++n) {
      for (const auto& gens_full : permgroup::all_subgroups(n)) {
        permgroup::PermGroupSpec gamma;
        gamma.n = n;
        gamma.generators = gens_full;
        auto graded = specoracle::cartesian_mset(n, gamma);
        auto direct = mset::power_multiplicities(n, gamma);
        c.expect(graded.elements == direct.elements,
                 "graded set differs at n=" + std::to_string(n));
      }
    }

    // homogeneity of the generic representation model
    for (int64_t n = 2; n <= 5; ++n)
      for (int64_t m = 1; m <= 6; ++m) {
        auto got = specoracle::gn_rep_check(n, m);
        c.expect(got.elements == std::vector<Int>{Int(n)},
                 "homogeneity fails at n=" + std::to_string(n) +
                     " m=" + std::to_string(m));
      }
  } catch (const std::exception& e) {
    c.fail(e.what());
  }
}

// ----- 9: vanishing-correlation trend for the tall-spacer staircase -----

void criterion9() {
  Criterion c(9, "tall-spacer staircase correlations shrink under 0.1");
  rankone::TowerConstruction hs;
  hs.tail.kind = rankone::TailRule::high_staircase;
  hs.tail.r = rankone::parse_rrule("n+2");
  hs.tail.z = rankone::parse_zrule("h");
  rankone::LevelSet A{3, {0, 1, 2}};
  Rat muA = Rat(Int(A.levels.size())) * rankone::width(hs, A.stage);

  std::vector<Rat> normalized;
  try {
    for (int64_t n : {4, 5, 6}) {
      Int h = rankone::heights(hs, n).back();
      int64_t m = h.convert_to<int64_t>();
      int64_t N = rankone::auto_stage(hs, n + 1, m, 40);
      auto cb = rankone::correlation(hs, A, A, m, N);
      normalized.push_back(cb.hi / muA);
    }
    for (size_t i = 1; i < normalized.size(); ++i)
      c.expect(normalized[i] <= normalized[i - 1],
               "normalized correlation is not decreasing");
    c.expect(normalized.back() <= Rat(1, 10),
             "normalized correlation above 0.1 at the third stage");
  } catch (const std::exception& e) {
    c.fail(e.what());
  }
}

// ----- 10: CLI corpus determinism -----

std::string run_cli(const std::string& cmd, int& exit_code) {
  std::string full = cmd + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion10(const std::string& sml_bin, const std::string& data_dir) {
  Criterion c(10, "CLI corpus is byte-identical across two runs");
  const std::string B = "'" + sml_bin + "'";
  const std::string D = data_dir;
  std::vector<std::string> corpus = {
      B + " realize --set 2,3 --verify",
      B + " realize --set 1,2,3,6 --verify",
      B + " plan --set 3,4",
      B + " plan --set 2,3,6",
      B + " plan --set 1,5",
      B + " plan --set '2,tail:mulsg(2)'",
      B + " multiplicity --set '2,4,8,tail:pow(2)'",
      B + " multiplicity --set 2,3 --with 5",
      B + " multiplicity --poisson oddprod --terms 5",
      B + " multiplicity --power 4 --gens 1,0,2,3",
      B + " multiplicity --closure add --gens 3,5 --bound 30",
      B + " simulate --spec " + D + "/chacon.json --stages 1,2,3,4,5",
      B + " simulate --spec " + D + "/djr.json --stages 1,2,3",
      B + " --format csv simulate --spec " + D +
          "/chacon.json --A 3:0,1 --B 3:0,1 --m 5 --stages 5,7,9 --tol 1/4",
      B + " weak-limit --spec " + D + "/halfspacer.json --case iv --p 1 --tol 1/50",
      B + " --format csv weak-limit --spec " + D +
          "/zerospacer_growing.json --case i --p 1,2 --tol 1/50",
      B + " weak-limit --spec " + D + "/onespacer.json --case ii --p 1 --tol 1/50",
      B + " weak-limit --spec " + D + "/chacon.json --case iv --p 1 --tol 1/50",
      B + " cocycle-verify --spec " + D +
          "/cocycle_z3.json --claim claim2.8 --chi 1 --k 1 --tol 1/20",
      B + " cocycle-verify --spec " + D +
          "/cocycle_z3.json --claim lemma2.6 --chi 1 --k '1;2' --tol 1/20",
      B + " cocycle-verify --spec " + D +
          "/cocycle_z3_half.json --claim claim4.2 --chi 1 --k 1 --tol 1/20",
      B + " orbits --group " + D + "/triple_23.json",
      B + " orbits --group " + D + "/triple_23.json --full",
      B + " oracle --op census --symbols 6 --n 3",
      B + " oracle --op cartesian --n 4",
      B + " oracle --op sym-square --grades 4",
      B + " oracle --op invariant-power --symbols 5 --n 3 --gens 1,2,0",
      B + " oracle --op gn-rep --n 3 --m 4",
  };

  auto run_all = [&] {
    std::ostringstream all;
    for (const auto& cmd : corpus) {
      int code = 0;
      std::string out = run_cli(cmd, code);
      all << "== " << cmd << "\nexit " << code << "\n" << out;
    }
    return all.str();
  };

  std::string first = run_all();
  std::string second = run_all();
  c.expect(!first.empty(), "corpus produced no output");
  c.expect(first == second, "outputs differ between runs");

  // spot-check the exit-code contract on the refusal row
  int code = 0;
  (void)run_cli(B + " weak-limit --spec " + D +
                    "/chacon.json --case iv --p 1 --tol 1/50",
                code);
  c.expect(code == 3, "spacer-hypothesis refusal did not exit 3");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <sml-binary> <data-dir>\n";
    return 2;
  }
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10(argv[1], argv[2]);
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

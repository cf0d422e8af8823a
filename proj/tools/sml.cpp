// Command-line front end.  Every command reads its inputs, runs the library,
// and emits one report to stdout (or --out): a "sml/1" JSON envelope, or CSV
// for correlation-shaped batches.  Identical inputs produce identical bytes.
//
// Exit codes: 0 all records pass, 1 some verification failed, 2 usage or
// malformed input, 3 refusal (hypothesis or guard mismatch).

#include <sml/serialize.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace sml;
using serialize::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot read spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw structural_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

std::vector<int64_t> parse_int_list(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::logic_error&) {
      throw structural_error("cannot parse integer: " + tok);
    }
  }
  return out;
}

// permutations as one-line images "1,0,2"; several generators joined by ';'
std::vector<permgroup::Perm> parse_perms(const std::string& text) {
  std::vector<permgroup::Perm> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    permgroup::Perm p;
    for (auto x : parse_int_list(part)) {
      if (x < 0 || x > 255) throw structural_error("permutation image out of range");
      p.push_back((uint8_t)x);
    }
    permgroup::validate_perm(p, (int64_t)p.size());
    out.push_back(std::move(p));
  }
  return out;
}

int64_t stage_cap(int64_t flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* s = std::getenv("SML_STAGE_CAP")) {
    try {
      int64_t v = std::stoll(s);
      if (v > 0) return v;
    } catch (const std::logic_error&) {
      throw structural_error("SML_STAGE_CAP must be a positive integer");
    }
    throw structural_error("SML_STAGE_CAP must be a positive integer");
  }
  return 40;
}

rankone::LimitCase parse_case(const std::string& text) {
  if (text == "i") return rankone::LimitCase::i;
  if (text == "ii") return rankone::LimitCase::ii;
  if (text == "iii") return rankone::LimitCase::iii;
  if (text == "iv") return rankone::LimitCase::iv;
  throw structural_error("unknown case (want i, ii, iii, or iv): " + text);
}

cocycle::VerifyMode parse_claim(const std::string& text) {
  if (text == "lemma2.6") return cocycle::VerifyMode::lemma26;
  if (text == "claim2.8") return cocycle::VerifyMode::claim28;
  if (text == "claim4.2") return cocycle::VerifyMode::claim42;
  throw structural_error(
      "unknown claim (want lemma2.6, claim2.8, or claim4.2): " + text);
}

specoracle::FormalSpectrum spectrum_of(int64_t symbols, const std::string& prefix) {
  if (symbols < 1) throw structural_error("need at least one symbol");
  specoracle::FormalSpectrum s;
  for (int64_t i = 0; i < symbols; ++i)
    s.symbols.push_back(prefix + std::to_string(i));
  return s;
}

permgroup::PermGroupSpec group_of(int64_t degree, const std::string& gens_text) {
  permgroup::PermGroupSpec spec;
  spec.n = degree;
  spec.generators = parse_perms(gens_text);
  permgroup::validate_spec(spec);
  return spec;
}

struct Output {
  std::string payload;
  bool all_pass = true;
};

void write_out(const Output& out, const std::string& path) {
  if (path.empty()) {
    std::cout << out.payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw structural_error("cannot write to " + path);
  f << out.payload;
  if (!f) throw structural_error("cannot write to " + path);
}

std::string require_format(const std::string& format, bool csv_allowed) {
  if (format != "json" && format != "csv")
    throw structural_error("unknown format (want json or csv): " + format);
  if (format == "csv" && !csv_allowed)
    throw structural_error("csv output is not defined for this command");
  return format;
}

std::string csv_line(int64_t stage, int64_t m, const std::string& lo,
                     const std::string& hi, const std::string& prediction,
                     bool pass) {
  return std::to_string(stage) + "," + std::to_string(m) + "," + lo + "," + hi +
         "," + prediction + "," + (pass ? "true" : "false") + "\n";
}

// ----- commands -----

Output run_realize(const std::string& set_text, bool verify, int64_t slot_guard) {
  auto E = serialize::parse_mset_text(set_text);
  if (E.has_infinity || E.tail.kind != mset::Tail::none)
    throw structural_error("realize needs a finite set");
  std::set<int64_t> target;
  for (const auto& x : E.elements) {
    if (x > std::numeric_limits<int64_t>::max())
      throw guard_error("set element exceeds the realizable range");
    target.insert(x.convert_to<int64_t>());
  }
  auto R = algebra::realize_finite(target, slot_guard);
  json rec = serialize::realization_to_json(R);
  bool ok = true;
  if (verify) {
    auto L = algebra::multiplicity_set_L(R.G, R.v, R.support);
    ok = L == target;
    rec["verified"] = ok;
  }
  Output out;
  out.all_pass = ok;
  out.payload = serialize::dump(
      serialize::report_envelope("realize", json::array({rec})));
  return out;
}

Output run_orbits(const std::string& group_path, bool full, int64_t order_guard) {
  json j = load_json(group_path);
  algebra::FinAbGroup G;
  algebra::MonomialAut v;
  G.summands = j.at("summands").get<std::vector<int64_t>>();
  v.perm = j.at("perm").get<std::vector<size_t>>();
  v.units = j.at("units").get<std::vector<int64_t>>();
  algebra::validate_group(G);
  algebra::validate_aut(G, v);

  std::set<int64_t> L;
  json rec;
  rec["summands"] = G.summands;
  if (!full && j.contains("support")) {
    auto support = j.at("support").get<algebra::SupportSlots>();
    rec["support"] = support;
    L = algebra::multiplicity_set_L(G, v, support);
  } else {
    L = algebra::multiplicity_set_L(G, v, order_guard);
  }
  rec["L"] = std::vector<int64_t>(L.begin(), L.end());

  Output out;
  out.payload =
      serialize::dump(serialize::report_envelope("orbits", json::array({rec})));
  return out;
}

Output run_simulate(const std::string& spec_path, const std::string& stages_text,
                    const std::string& a_text, const std::string& b_text,
                    int64_t m, const std::string& tol_text,
                    const std::string& format) {
  auto c = serialize::construction_from_json(load_json(spec_path));
  bool correlation_mode = !a_text.empty();
  require_format(format, correlation_mode);
  auto stages = parse_int_list(stages_text);
  if (stages.empty()) throw structural_error("simulate needs --stages");

  if (!correlation_mode) {
    // height table
    json records = json::array();
    for (auto n : stages) {
      if (n < 1) throw structural_error("stages start at 1");
      json rec;
      rec["stage"] = n;
      rec["height"] = serialize::big_json(rankone::heights(c, n).back());
      rec["width"] = rat_str(rankone::width(c, n));
      records.push_back(rec);
    }
    Output out;
    out.payload =
        serialize::dump(serialize::report_envelope("simulate", records));
    return out;
  }

  auto A = serialize::parse_level_set(a_text);
  auto B = b_text.empty() ? A : serialize::parse_level_set(b_text);
  if (m < 0) throw structural_error("correlation needs --m >= 0");
  Rat tol = parse_rat(tol_text);

  // certified correlation rows against the product baseline
  Rat muA = Rat(Int(A.levels.size())) * rankone::width(c, A.stage);
  Rat muB = Rat(Int(B.levels.size())) * rankone::width(c, B.stage);
  Rat prediction = muA * muB;

  std::vector<serialize::CorrelationRow> rows;
  for (auto n : stages) {
    auto cb = rankone::correlation(c, A, B, m, n);
    serialize::CorrelationRow row;
    row.stage = n;
    row.m = m;
    row.lo = cb.lo;
    row.hi = cb.hi;
    row.prediction = prediction;
    row.pass = cb.lo >= prediction - tol && cb.hi <= prediction + tol;
    rows.push_back(row);
  }

  Output out;
  for (const auto& r : rows) out.all_pass = out.all_pass && r.pass;
  if (format == "csv") {
    out.payload = serialize::correlation_csv(rows);
  } else {
    json records = json::array();
    for (const auto& r : rows) {
      json rec;
      rec["stage"] = r.stage;
      rec["m"] = r.m;
      rec["lo"] = rat_str(r.lo);
      rec["hi"] = rat_str(r.hi);
      rec["prediction"] = rat_str(r.prediction);
      rec["pass"] = r.pass;
      records.push_back(rec);
    }
    out.payload =
        serialize::dump(serialize::report_envelope("simulate", records));
  }
  return out;
}

Output run_weak_limit(const std::string& spec_path, const std::string& case_text,
                      const std::string& p_text, const std::string& a_text,
                      const std::string& b_text, const std::string& tol_text,
                      int64_t cap_flag, int64_t min_height,
                      const std::string& format) {
  require_format(format, true);
  auto c = serialize::construction_from_json(load_json(spec_path));
  auto kase = parse_case(case_text);
  auto ps = parse_int_list(p_text);
  if (ps.empty()) throw structural_error("weak-limit needs --p");
  auto A = serialize::parse_level_set(a_text);
  auto B = serialize::parse_level_set(b_text);
  Rat tol = parse_rat(tol_text);
  int64_t cap = stage_cap(cap_flag);

  json records = json::array();
  std::vector<serialize::CorrelationRow> rows;
  Output out;
  for (auto p : ps) {
    auto r = rankone::weak_limit_check(c, kase, p, A, B, tol, cap, min_height);
    records.push_back(serialize::weak_limit_to_json(r));
    rows.push_back({r.stage, r.m, r.interval.lo, r.interval.hi, r.prediction,
                    r.pass});
    out.all_pass = out.all_pass && r.pass;
  }
  out.payload = format == "csv"
                    ? serialize::correlation_csv(rows)
                    : serialize::dump(
                          serialize::report_envelope("weak-limit", records));
  return out;
}

Output run_cocycle_verify(const std::string& spec_path,
                          const std::string& claim_text,
                          const std::string& chi_text, const std::string& k_text,
                          const std::string& a_text, const std::string& b_text,
                          const std::string& tol_text, int64_t cap_flag,
                          int64_t min_height, const std::string& format) {
  require_format(format, true);
  auto pc = serialize::cocycle_from_json(load_json(spec_path));
  auto mode = parse_claim(claim_text);
  algebra::GroupElement chi = parse_int_list(chi_text);

  std::vector<algebra::GroupElement> ks;
  std::stringstream ss(k_text);
  std::string part;
  while (std::getline(ss, part, ';'))
    if (!part.empty()) ks.push_back(parse_int_list(part));
  if (ks.empty()) throw structural_error("cocycle-verify needs --k");

  auto A = serialize::parse_level_set(a_text);
  auto B = serialize::parse_level_set(b_text);
  Rat tol = parse_rat(tol_text);
  int64_t cap = stage_cap(cap_flag);

  auto r = cocycle::verify_weak_limit_cocycle(pc, mode, ks, chi, A, B, tol, cap,
                                              min_height);
  json rec = serialize::cocycle_report_to_json(r);

  Output out;
  out.all_pass = r.pass;
  if (format == "csv") {
    out.payload = "stage,m,lo,hi,prediction,pass\n" +
                  csv_line(r.stage, r.m, rec["lo"].get<std::string>(),
                           rec["hi"].get<std::string>(),
                           rec["predicted"].get<std::string>(), r.pass);
  } else {
    out.payload = serialize::dump(
        serialize::report_envelope("cocycle-verify", json::array({rec})));
  }
  return out;
}

struct MultiplicityFlags {
  std::string set_text, with_text, closure, poisson, gens_text, witness_text;
  int64_t scale = 0, power = 0, bound = 0, terms = 5, p = 2, m = 0, k = 0;
  bool factor = false;
};

Output run_multiplicity(const MultiplicityFlags& f) {
  json rec;
  json inputs = json::object();
  mset::MSet result;

  if (!f.with_text.empty()) {
    rec["operation"] = "diamond";
    inputs["set"] = f.set_text;
    inputs["with"] = f.with_text;
    result = mset::diamond(serialize::parse_mset_text(f.set_text),
                           serialize::parse_mset_text(f.with_text));
  } else if (f.scale > 0) {
    rec["operation"] = "scale";
    inputs["set"] = f.set_text;
    inputs["scale"] = f.scale;
    result = mset::scale(Int(f.scale), serialize::parse_mset_text(f.set_text));
  } else if (f.factor) {
    rec["operation"] = "factor-scale";
    inputs["set"] = f.set_text;
    auto [g, inner] = mset::factor_scale(serialize::parse_mset_text(f.set_text));
    rec["inputs"] = inputs;
    rec["scale"] = serialize::big_json(g);
    rec["mset"] = serialize::mset_to_json(inner);
    rec["text"] = serialize::mset_text(inner);
    Output out;
    out.payload = serialize::dump(
        serialize::report_envelope("multiplicity", json::array({rec})));
    return out;
  } else if (f.power > 0) {
    rec["operation"] = "power";
    inputs["n"] = f.power;
    if (f.gens_text.empty()) {
      result = mset::power_multiplicities(f.power);
    } else {
      inputs["generators"] = f.gens_text;
      result = mset::power_multiplicities(f.power, group_of(f.power, f.gens_text));
    }
  } else if (!f.closure.empty()) {
    rec["operation"] = "closure-" + f.closure;
    if (f.closure != "add" && f.closure != "mul")
      throw structural_error("closure wants add or mul");
    if (f.bound < 1) throw structural_error("closure needs --bound");
    inputs["generators"] = f.gens_text;
    inputs["bound"] = f.bound;
    std::vector<Int> gens;
    for (auto x : parse_int_list(f.gens_text)) gens.push_back(Int(x));
    result = mset::semigroup_closure(gens,
                                     f.closure == "add"
                                         ? mset::SemigroupOp::add
                                         : mset::SemigroupOp::mul,
                                     Int(f.bound));
  } else if (!f.poisson.empty()) {
    rec["operation"] = "poisson-" + f.poisson;
    inputs["terms"] = f.terms;
    if (f.poisson == "oddprod") {
      result = mset::poisson_example82(f.terms);
    } else if (f.poisson == "exp") {
      inputs["p"] = f.p;
      result = mset::poisson_exp_p(Int(f.p), f.terms);
    } else if (f.poisson == "amk") {
      inputs["m"] = f.m;
      inputs["k"] = f.k;
      inputs["witness"] = f.witness_text;
      result = mset::poisson_amk(f.m, f.k, f.terms, parse_perms(f.witness_text));
    } else {
      throw structural_error("poisson wants oddprod, exp, or amk");
    }
  } else {
    rec["operation"] = "normalize";
    inputs["set"] = f.set_text;
    result = serialize::parse_mset_text(f.set_text);
  }

  rec["inputs"] = inputs;
  rec["mset"] = serialize::mset_to_json(result);
  rec["text"] = serialize::mset_text(result);
  Output out;
  out.payload = serialize::dump(
      serialize::report_envelope("multiplicity", json::array({rec})));
  return out;
}

Output run_plan(const std::string& set_text) {
  auto E = serialize::parse_mset_text(set_text);
  auto p = planner::plan(E);
  Output out;
  out.payload = serialize::dump(serialize::report_envelope(
      "plan", json::array({serialize::plan_to_json(p)})));
  return out;
}

struct OracleFlags {
  std::string op, gens_text, set_text, with_text;
  int64_t symbols = 0, n = 0, degree = 0, p = 2, grades = 3, m = 0;
};

Output run_oracle(const OracleFlags& f) {
  json rec;
  rec["operation"] = f.op;
  json inputs = json::object();
  json mset_field;
  json census_field;

  auto gamma = [&](int64_t degree) {
    return f.gens_text.empty() ? group_of(degree, "")
                               : group_of(degree, f.gens_text);
  };

  if (f.op == "invariant-power") {
    inputs["symbols"] = f.symbols;
    inputs["n"] = f.n;
    if (!f.gens_text.empty()) inputs["generators"] = f.gens_text;
    mset_field = serialize::mset_to_json(specoracle::invariant_power_mset(
        spectrum_of(f.symbols, "x"), f.n, gamma(f.n)));
  } else if (f.op == "cartesian") {
    inputs["n"] = f.n;
    if (!f.gens_text.empty()) inputs["generators"] = f.gens_text;
    mset_field = serialize::mset_to_json(
        f.gens_text.empty() ? specoracle::cartesian_mset(f.n)
                            : specoracle::cartesian_mset(f.n, gamma(f.n)));
  } else if (f.op == "tensor-sym") {
    inputs["symbols"] = f.symbols;
    inputs["n"] = f.n;
    auto [tensor, sym] =
        specoracle::tensor_vs_sym(spectrum_of(f.symbols, "x"), f.n);
    rec["tensor"] = serialize::mset_to_json(tensor);
    mset_field = serialize::mset_to_json(sym);
  } else if (f.op == "exp") {
    inputs["p"] = f.p;
    inputs["grades"] = f.grades;
    mset_field = serialize::mset_to_json(specoracle::exp_mset(f.p, f.grades));
  } else if (f.op == "sym-square") {
    inputs["grades"] = f.grades;
    mset_field =
        serialize::mset_to_json(specoracle::exp_sym_square_mset(f.grades));
  } else if (f.op == "gn-rep") {
    inputs["n"] = f.n;
    inputs["m"] = f.m;
    mset_field = serialize::mset_to_json(specoracle::gn_rep_check(f.n, f.m));
  } else if (f.op == "disjoint") {
    inputs["set"] = f.set_text;
    inputs["with"] = f.with_text;
    auto Ma = serialize::parse_mset_text(f.set_text);
    auto Mb = serialize::parse_mset_text(f.with_text);
    mset_field = serialize::mset_to_json(specoracle::strong_disjoint_product(
        spectrum_of(std::max<int64_t>(f.symbols, 1), "x"), Ma,
        spectrum_of(std::max<int64_t>(f.symbols, 1), "y"), Mb));
  } else if (f.op == "census") {
    inputs["symbols"] = f.symbols;
    inputs["n"] = f.n;
    if (!f.gens_text.empty()) inputs["generators"] = f.gens_text;
    census_field = serialize::census_to_json(specoracle::tensor_power_census(
        spectrum_of(f.symbols, "x"), f.n, gamma(f.n)));
  } else {
    throw structural_error("unknown oracle op: " + f.op);
  }

  rec["inputs"] = inputs;
  if (!mset_field.is_null()) rec["mset"] = mset_field;
  if (!census_field.is_null()) rec["census"] = census_field;
  Output out;
  out.payload = serialize::dump(
      serialize::report_envelope("oracle", json::array({rec})));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral multiplicity laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string out_path;
  app.add_option("--format", format, "json or csv");
  app.add_option("--out", out_path, "write the report to a file");

  // realize
  std::string rz_set;
  bool rz_verify = false;
  int64_t rz_guard = 10000;
  auto* rz = app.add_subcommand("realize", "build a (G, v, H) triple for a finite set");
  rz->add_option("--set", rz_set, "finite multiplicity set, e.g. 2,3")->required();
  rz->add_flag("--verify", rz_verify, "re-derive L(G, v, H) and compare");
  rz->add_option("--slot-guard", rz_guard, "refuse constructions beyond this many slots");

  // orbits
  std::string ob_group;
  bool ob_full = false;
  int64_t ob_guard = 1000000;
  auto* ob = app.add_subcommand("orbits", "orbit-length set of a stored triple");
  ob->add_option("--group", ob_group, "triple record file")->required();
  ob->add_flag("--full", ob_full, "use the whole group, ignoring the support");
  ob->add_option("--order-guard", ob_guard, "largest group order to enumerate");

  // simulate
  std::string sim_spec, sim_stages = "1,2,3,4,5,6,7,8", sim_a, sim_b,
              sim_tol = "1/50";
  int64_t sim_m = 0;
  auto* sim = app.add_subcommand("simulate", "heights or certified correlations");
  sim->add_option("--spec", sim_spec, "construction spec file")->required();
  sim->add_option("--stages", sim_stages, "comma list of stages");
  sim->add_option("--A", sim_a, "level set stage:i,j,k (enables correlation mode)");
  sim->add_option("--B", sim_b, "second level set (defaults to --A)");
  sim->add_option("--m", sim_m, "shift for correlation mode");
  sim->add_option("--tol", sim_tol, "tolerance around the product baseline");

  // weak-limit
  std::string wl_spec, wl_case, wl_p = "1", wl_a = "3:0,1,2", wl_b = "3:0,1,2",
              wl_tol = "1/50";
  int64_t wl_cap = 0, wl_min_height = 10000;
  auto* wl = app.add_subcommand("weak-limit", "certified weak-limit verification");
  wl->add_option("--spec", wl_spec, "construction spec file")->required();
  wl->add_option("--case", wl_case, "spacer case: i, ii, iii, or iv")->required();
  wl->add_option("--p", wl_p, "comma list of powers");
  wl->add_option("--A", wl_a, "level set stage:i,j,k");
  wl->add_option("--B", wl_b, "level set stage:i,j,k");
  wl->add_option("--tol", wl_tol, "tolerance as a rational, e.g. 1/50");
  wl->add_option("--cap", wl_cap, "stage cap (default SML_STAGE_CAP or 40)");
  wl->add_option("--min-height", wl_min_height, "first tower height to test");

  // cocycle-verify
  std::string cv_spec, cv_claim, cv_chi, cv_k, cv_a = "3:0,1,2", cv_b = "3:0,1,2",
              cv_tol = "1/20";
  int64_t cv_cap = 0, cv_min_height = 10000;
  auto* cv = app.add_subcommand("cocycle-verify", "twisted weak-limit verification");
  cv->add_option("--spec", cv_spec, "cocycle spec file (construction + labels)")->required();
  cv->add_option("--claim", cv_claim, "lemma2.6, claim2.8, or claim4.2")->required();
  cv->add_option("--chi", cv_chi, "character exponents, comma list")->required();
  cv->add_option("--k", cv_k, "payload elements, ';' separated comma lists")->required();
  cv->add_option("--A", cv_a, "level set stage:i,j,k");
  cv->add_option("--B", cv_b, "level set stage:i,j,k");
  cv->add_option("--tol", cv_tol, "tolerance as a rational");
  cv->add_option("--cap", cv_cap, "stage cap (default SML_STAGE_CAP or 40)");
  cv->add_option("--min-height", cv_min_height, "first tower height to test");

  // multiplicity
  MultiplicityFlags mf;
  auto* mu = app.add_subcommand("multiplicity", "multiplicity-set calculus");
  mu->add_option("--set", mf.set_text, "multiplicity set text");
  mu->add_option("--with", mf.with_text, "second set: compute the diamond product");
  mu->add_option("--scale", mf.scale, "multiply the set by an integer");
  mu->add_flag("--factor", mf.factor, "extract the largest common factor");
  mu->add_option("--power", mf.power, "Cartesian-power multiplicities for T^(xn)");
  mu->add_option("--gens", mf.gens_text, "permutation generators 1,0,2;0,2,1");
  mu->add_option("--closure", mf.closure, "semigroup closure: add or mul");
  mu->add_option("--bound", mf.bound, "closure truncation bound");
  mu->add_option("--poisson", mf.poisson, "family: oddprod, exp, or amk");
  mu->add_option("--terms", mf.terms, "number of family terms");
  mu->add_option("--p", mf.p, "base for the exp family");
  mu->add_option("--m", mf.m, "A(m, k) parameter m");
  mu->add_option("--k", mf.k, "A(m, k) parameter k");
  mu->add_option("--witness", mf.witness_text, "order-k subgroup generators for amk");

  // plan
  std::string pl_set;
  auto* pl = app.add_subcommand("plan", "route a target set to a realization theorem");
  pl->add_option("--set", pl_set, "multiplicity set text")->required();

  // oracle
  OracleFlags of;
  auto* oc = app.add_subcommand("oracle", "formal-spectrum counting checks");
  oc->add_option("--op", of.op,
                 "invariant-power, cartesian, tensor-sym, exp, sym-square, "
                 "gn-rep, disjoint, or census")
      ->required();
  oc->add_option("--symbols", of.symbols, "number of generic symbols");
  oc->add_option("--n", of.n, "tensor-power degree");
  oc->add_option("--gens", of.gens_text, "permutation generators");
  oc->add_option("--p", of.p, "exp base");
  oc->add_option("--grades", of.grades, "number of graded terms");
  oc->add_option("--m", of.m, "number of gn-rep orbits");
  oc->add_option("--set", of.set_text, "first spectral type for disjoint");
  oc->add_option("--with", of.with_text, "second spectral type for disjoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (!(sim->parsed() || wl->parsed() || cv->parsed()))
      require_format(format, false);
    Output out;
    if (rz->parsed()) out = run_realize(rz_set, rz_verify, rz_guard);
    else if (ob->parsed()) out = run_orbits(ob_group, ob_full, ob_guard);
    else if (sim->parsed())
      out = run_simulate(sim_spec, sim_stages, sim_a, sim_b, sim_m, sim_tol, format);
    else if (wl->parsed())
      out = run_weak_limit(wl_spec, wl_case, wl_p, wl_a, wl_b, wl_tol, wl_cap,
                           wl_min_height, format);
    else if (cv->parsed())
      out = run_cocycle_verify(cv_spec, cv_claim, cv_chi, cv_k, cv_a, cv_b,
                               cv_tol, cv_cap, cv_min_height, format);
    else if (mu->parsed()) out = run_multiplicity(mf);
    else if (pl->parsed()) out = run_plan(pl_set);
    else if (oc->parsed()) out = run_oracle(of);
    else throw structural_error("no command given");

    write_out(out, out_path);
    return out.all_pass ? 0 : 1;
  } catch (const hypothesis_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const guard_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const structural_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#pragma once

// JSON and CSV records.  Field order is fixed (ordered_json) so identical
// inputs serialize to identical bytes; rationals travel as "p/q" strings,
// never floats.

#include "sml/cocycle.hpp"
#include "sml/planner.hpp"
#include "sml/specoracle.hpp"

#include <json.hpp>

#include <complex>
#include <cstdio>
#include <string>
#include <vector>

namespace sml::serialize {

using json = nlohmann::ordered_json;

// ----- scalar helpers -----

// big integers ride as numbers while they fit, strings after
inline json big_json(const Int& x) {
  if (x >= std::numeric_limits<int64_t>::min() &&
      x <= std::numeric_limits<int64_t>::max())
    return x.convert_to<int64_t>();
  return x.str();
}

inline Int big_from(const json& j) {
  if (j.is_number_integer()) return Int(j.get<int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw structural_error("expected an integer or integer string");
}

inline std::string complex_str(std::complex<double> z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

// ----- realization triples -----

// {"summands": [...], "perm": [...], "units": [...], "support": [...]}
inline json realization_to_json(const algebra::Realization& R) {
  json j;
  j["summands"] = R.G.summands;
  j["perm"] = R.v.perm;
  j["units"] = R.v.units;
  j["support"] = R.support;
  return j;
}

inline algebra::Realization realization_from_json(const json& j) {
  algebra::Realization R;
  R.G.summands = j.at("summands").get<std::vector<int64_t>>();
  R.v.perm = j.at("perm").get<std::vector<size_t>>();
  R.v.units = j.at("units").get<std::vector<int64_t>>();
  R.support = j.at("support").get<algebra::SupportSlots>();
  algebra::validate_group(R.G);
  algebra::validate_aut(R.G, R.v);
  return R;
}

// ----- construction specs -----

inline rankone::DeltaRule parse_delta(const std::string& text) {
  rankone::DeltaRule d;
  if (text.size() >= 2 && text.compare(text.size() - 2, 2, "/n") == 0) {
    d.kind = rankone::DeltaRule::inv_n;
    d.c = parse_rat(text.substr(0, text.size() - 2));
  } else {
    d.kind = rankone::DeltaRule::constant;
    d.c = parse_rat(text);
  }
  return d;
}

inline json construction_to_json(const rankone::TowerConstruction& c) {
  json j;
  json prefix = json::array();
  for (const auto& st : c.prefix) {
    json s = json::array();
    for (const auto& x : st.s) s.push_back(big_json(x));
    json stage;
    stage["r"] = st.r;
    stage["s"] = s;
    prefix.push_back(stage);
  }
  j["prefix"] = prefix;

  json tail;
  tail["kind"] = rankone::tail_kind_name(c.tail.kind);
  switch (c.tail.kind) {
    case rankone::TailRule::none:
    case rankone::TailRule::chacon:
    case rankone::TailRule::djr:
      break;
    case rankone::TailRule::staircase:
    case rankone::TailRule::zero_spacer:
    case rankone::TailRule::half_spacer:
      tail["r"] = c.tail.r.str();
      break;
    case rankone::TailRule::almost_staircase:
      tail["r"] = c.tail.r.str();
      tail["delta"] = c.tail.delta.str();
      break;
    case rankone::TailRule::high_staircase:
      tail["r"] = c.tail.r.str();
      tail["z"] = c.tail.z.str();
      break;
    case rankone::TailRule::custom:
      tail["r"] = c.tail.r.str();
      tail["cycle"] = c.tail.s_cycle;
      break;
  }
  j["tail"] = tail;
  j["base_width"] = rat_str(c.base_width);
  return j;
}

inline rankone::TowerConstruction construction_from_json(const json& j) {
  rankone::TowerConstruction c;
  for (const auto& stage : j.at("prefix")) {
    rankone::StageParams p;
    p.r = stage.at("r").get<int64_t>();
    for (const auto& x : stage.at("s")) p.s.push_back(big_from(x));
    rankone::validate_stage(p);
    c.prefix.push_back(std::move(p));
  }

  const auto& tail = j.at("tail");
  std::string kind = tail.at("kind").get<std::string>();
  auto want_r = [&] { c.tail.r = rankone::parse_rrule(tail.at("r").get<std::string>()); };
  if (kind == "none") {
    c.tail.kind = rankone::TailRule::none;
  } else if (kind == "chacon") {
    c.tail.kind = rankone::TailRule::chacon;
  } else if (kind == "djr") {
    c.tail.kind = rankone::TailRule::djr;
  } else if (kind == "staircase") {
    c.tail.kind = rankone::TailRule::staircase;
    want_r();
  } else if (kind == "zero_spacer") {
    c.tail.kind = rankone::TailRule::zero_spacer;
    want_r();
  } else if (kind == "half_spacer") {
    c.tail.kind = rankone::TailRule::half_spacer;
    want_r();
  } else if (kind == "almost_staircase") {
    c.tail.kind = rankone::TailRule::almost_staircase;
    want_r();
    c.tail.delta = parse_delta(tail.at("delta").get<std::string>());
  } else if (kind == "high_staircase") {
    c.tail.kind = rankone::TailRule::high_staircase;
    want_r();
    c.tail.z = rankone::parse_zrule(tail.at("z").get<std::string>());
  } else if (kind == "custom") {
    c.tail.kind = rankone::TailRule::custom;
    want_r();
    c.tail.s_cycle = tail.at("cycle").get<std::vector<int64_t>>();
  } else {
    throw structural_error("unknown tail kind: " + kind);
  }

  if (j.contains("base_width"))
    c.base_width = parse_rat(j.at("base_width").get<std::string>());
  return c;
}

// ----- cocycle spec files (construction + labels in one artifact) -----

inline json zelem_to_json(const algebra::MetabelianGroup& Z, const algebra::ZElem& a) {
  if (Z.d_order == 1 && Z.K.slot_count() == 1) return a.k[0];
  json j;
  j["d"] = a.d;
  j["k"] = a.k;
  return j;
}

inline algebra::ZElem zelem_from_json(const algebra::MetabelianGroup& Z, const json& j) {
  algebra::ZElem a;
  if (j.is_number_integer()) {
    if (Z.K.slot_count() != 1)
      throw structural_error("scalar label needs a one-summand target");
    a.d = 0;
    a.k = {j.get<int64_t>()};
    return a;
  }
  a.d = j.at("d").get<int64_t>();
  a.k = j.at("k").get<algebra::GroupElement>();
  return a;
}

inline json cocycle_to_json(const cocycle::ProductCocycle& pc) {
  json j = construction_to_json(pc.base);
  if (pc.fiber.K.slot_count() == 0 && pc.labels.empty()) return j;

  json target;
  target["summands"] = pc.fiber.K.summands;
  target["perm"] = pc.fiber.v.perm;
  target["units"] = pc.fiber.v.units;
  target["d_order"] = pc.fiber.d_order;

  json stages = json::array();
  for (const auto& stage : pc.labels) {
    json row = json::array();
    for (const auto& a : stage) row.push_back(zelem_to_json(pc.fiber, a));
    stages.push_back(row);
  }

  json labels;
  labels["target"] = target;
  labels["stages"] = stages;
  j["labels"] = labels;
  return j;
}

inline cocycle::ProductCocycle cocycle_from_json(const json& j) {
  cocycle::ProductCocycle pc;
  pc.base = construction_from_json(j);
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    const auto& target = labels.at("target");
    pc.fiber.K.summands = target.at("summands").get<std::vector<int64_t>>();
    pc.fiber.v.perm = target.at("perm").get<std::vector<size_t>>();
    pc.fiber.v.units = target.at("units").get<std::vector<int64_t>>();
    pc.fiber.d_order = target.value("d_order", int64_t(1));
    for (const auto& row : labels.at("stages")) {
      std::vector<algebra::ZElem> stage;
      for (const auto& cell : row) stage.push_back(zelem_from_json(pc.fiber, cell));
      pc.labels.push_back(std::move(stage));
    }
  }
  cocycle::validate_cocycle(pc);
  return pc;
}

// ----- level sets -----

// "stage:i,j,k"
inline rankone::LevelSet parse_level_set(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw structural_error("level set syntax: stage:i,j,k");
  rankone::LevelSet A;
  try {
    A.stage = std::stoll(text.substr(0, colon));
    size_t pos = colon + 1;
    while (pos < text.size()) {
      auto next = text.find(',', pos);
      if (next == std::string::npos) next = text.size();
      A.levels.push_back(std::stoll(text.substr(pos, next - pos)));
      pos = next + 1;
    }
  } catch (const std::logic_error&) {
    throw structural_error("cannot parse level set: " + text);
  }
  std::sort(A.levels.begin(), A.levels.end());
  A.levels.erase(std::unique(A.levels.begin(), A.levels.end()), A.levels.end());
  return A;
}

// ----- multiplicity sets -----

inline json mset_to_json(const mset::MSet& e) {
  json j;
  json el = json::array();
  for (const auto& x : e.elements) el.push_back(x.str());
  j["elements"] = el;
  j["infinite"] = e.has_infinity;
  j["tail"] = e.tail.str();
  return j;
}

namespace detail {

// split on commas that sit outside parentheses
inline std::vector<std::string> split_top(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline mset::Tail parse_tail(const std::string& spec) {
  mset::Tail t;
  auto args_of = [&](const std::string& name) {
    auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
      throw structural_error("bad tail spec: " + name);
    return spec.substr(open + 1, spec.size() - open - 2);
  };
  if (spec == "oddprod") {
    t.kind = mset::Tail::example82;
  } else if (spec.rfind("pow(", 0) == 0) {
    t.kind = mset::Tail::pow;
    try {
      t.p = Int(args_of("pow"));
    } catch (const std::runtime_error&) {
      throw structural_error("pow tail needs an integer base");
    }
  } else if (spec.rfind("addsg(", 0) == 0 || spec.rfind("mulsg(", 0) == 0) {
    t.kind = spec[0] == 'a' ? mset::Tail::semigroup_add : mset::Tail::semigroup_mul;
    for (const auto& tok : split_top(args_of("sg"))) {
      try {
        t.gens.push_back(Int(tok));
      } catch (const std::runtime_error&) {
        throw structural_error("cannot parse tail generator: " + tok);
      }
    }
  } else if (spec.rfind("amk(", 0) == 0) {
    t.kind = mset::Tail::amk;
    auto args = split_top(args_of("amk"));
    if (args.size() != 2) throw structural_error("amk tail needs two arguments");
    try {
      t.m = std::stoll(args[0]);
      t.k = std::stoll(args[1]);
    } catch (const std::logic_error&) {
      throw structural_error("amk tail needs integer arguments");
    }
  } else {
    throw structural_error("unknown tail spec: " + spec);
  }
  return t;
}

}  // namespace detail

// comma list with optional "inf" and "tail:..." tags, e.g. "2,4,8,tail:pow(2)"
inline mset::MSet parse_mset_text(const std::string& text) {
  std::vector<Int> elements;
  bool infinite = false;
  mset::Tail tail;
  for (const auto& tok : detail::split_top(text)) {
    if (tok.empty()) continue;
    if (tok == "inf") {
      infinite = true;
    } else if (tok.rfind("tail:", 0) == 0) {
      tail = detail::parse_tail(tok.substr(5));
      infinite = true;
    } else {
      try {
        elements.push_back(Int(tok));
      } catch (const std::runtime_error&) {
        throw structural_error("cannot parse set element: " + tok);
      }
    }
  }
  auto e = mset::make_mset(std::move(elements));
  e.has_infinity = infinite;
  e.tail = tail;
  mset::validate_mset(e);
  return e;
}

inline std::string mset_text(const mset::MSet& e) {
  std::string out;
  for (size_t i = 0; i < e.elements.size(); ++i)
    out += (i ? "," : "") + e.elements[i].str();
  if (e.tail.kind != mset::Tail::none) {
    if (!out.empty()) out += ",";
    out += "tail:" + e.tail.str();
  } else if (e.has_infinity) {
    if (!out.empty()) out += ",";
    out += "inf";
  }
  return out;
}

// ----- verification records: {claim, stage, predicted, lo, hi, pass} -----

inline json weak_limit_to_json(const rankone::WeakLimitReport& r) {
  json j;
  j["claim"] = std::string("lemma2.4-") + rankone::limit_case_name(r.kase);
  j["stage"] = r.stage;
  j["predicted"] = rat_str(r.prediction);
  j["lo"] = rat_str(r.interval.lo);
  j["hi"] = rat_str(r.interval.hi);
  j["pass"] = r.pass;
  return j;
}

inline json cocycle_report_to_json(const cocycle::CocycleLimitReport& r) {
  json j;
  j["claim"] = cocycle::verify_mode_name(r.mode);
  j["stage"] = r.stage;

  Rat q;
  if (r.exact_prediction && r.prediction.rational_value(&q))
    j["predicted"] = rat_str(q);
  else
    j["predicted"] = complex_str(r.prediction_f);

  // certified real-part window of the measured twisted correlation
  Rat center;
  if (r.measured.exact && r.measured.value.rational_value(&center)) {
    j["lo"] = rat_str(center - r.measured.radius);
    j["hi"] = rat_str(center + r.measured.radius);
  } else {
    char lo[40], hi[40];
    std::snprintf(lo, sizeof lo, "%.12g", r.measured.value_f.real() - rat_double(r.measured.radius));
    std::snprintf(hi, sizeof hi, "%.12g", r.measured.value_f.real() + rat_double(r.measured.radius));
    j["lo"] = lo;
    j["hi"] = hi;
  }
  j["pass"] = r.pass;
  return j;
}

// ----- correlation CSV: stage,m,lo,hi,prediction,pass -----

struct CorrelationRow {
  int64_t stage = 0;
  int64_t m = 0;
  Rat lo, hi, prediction;
  bool pass = false;
};

inline std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "stage,m,lo,hi,prediction,pass\n";
  for (const auto& r : rows) {
    out += std::to_string(r.stage) + "," + std::to_string(r.m) + "," +
           rat_str(r.lo) + "," + rat_str(r.hi) + "," + rat_str(r.prediction) +
           "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

// ----- planner output: {route, parameters, caveats} -----

inline json plan_to_json(const planner::Plan& p) {
  json j;
  j["route"] = planner::route_name(p.route);
  json params = json::object();
  switch (p.route) {
    case planner::Plan::thm21: {
      json set = json::array();
      for (const auto& x : p.realized_set) set.push_back(big_json(x));
      params["realized_set"] = set;
      if (p.realization) params["triple"] = realization_to_json(*p.realization);
      break;
    }
    case planner::Plan::thm54: {
      json f = json::array();
      for (const auto& x : p.factors) f.push_back(big_json(x));
      params["factors"] = f;
      break;
    }
    case planner::Plan::thm57: {
      params["scale"] = big_json(p.scale_factor);
      json inner = json::array();
      for (const auto& x : p.inner.elements) inner.push_back(big_json(x));
      params["inner"] = inner;
      break;
    }
    case planner::Plan::thm35_63: {
      params["n"] = p.power_n;
      params["subgroup"] = p.subgroup_name;
      json gens = json::array();
      for (const auto& g : p.subgroup.generators) {
        json one = json::array();
        for (auto x : g) one.push_back((int64_t)x);
        gens.push_back(one);
      }
      params["generators"] = gens;
      break;
    }
    default:
      break;
  }
  j["parameters"] = params;
  j["caveats"] = p.caveats;
  return j;
}

// ----- oracle census -----

inline json census_to_json(const specoracle::PowerCensus& c) {
  json j;
  j["points"] = big_json(c.points);
  j["null_tuples"] = big_json(c.null_tuples);
  j["total_multiplicity"] = big_json(c.total_multiplicity);
  return j;
}

// ----- report envelope -----

inline json report_envelope(const std::string& command, json records) {
  json j;
  j["schema"] = "sml/1";
  j["command"] = command;
  j["records"] = std::move(records);
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace sml::serialize

// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "bayes.hpp"
#include "error.hpp"
#include "gen.hpp"
#include "json.hpp"
#include "lp.hpp"
#include "matroid.hpp"
#include "model.hpp"
#include "payments.hpp"
#include "pma/pma.h"
#include "rewards.hpp"
#include "submod.hpp"
#include "supermod.hpp"

using nlohmann::json;

struct pma_instance {
  pma::Instance inst;
  json source;
};

struct pma_bayes_instance {
  pma::BayesianInstance bi;
  json source;
};

namespace {

thread_local std::string g_last_error = "{}";

pma_status to_status(pma::ErrorCode c) { return static_cast<pma_status>(static_cast<int>(c)); }

pma_status fail(pma_status status, const std::string& msg, const std::vector<std::string>& details = {}) {
  g_last_error = json{{"code", static_cast<int>(status)}, {"message", msg}, {"details", details}}.dump();
  return status;
}

template <class F>
pma_status guard(F&& body) {
  try {
    body();
    return PMA_OK;
  } catch (const pma::Error& e) {
    return fail(to_status(e.code()), e.what(), e.details());
  } catch (const json::exception& e) {
    return fail(PMA_ERR_VALIDATION, std::string("malformed input: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(PMA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PMA_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const json& j, char** out) {
  if (!out) throw pma::Error(pma::ErrorCode::kUsage, "null output pointer");
  *out = dup_string(j.dump());
}

json parse_options(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  if (!j.is_object()) throw pma::Error(pma::ErrorCode::kUsage, "options must be a JSON object");
  return j;
}

void require(const void* p, const char* what) {
  if (!p) throw pma::Error(pma::ErrorCode::kUsage, std::string("null ") + what);
}

pma::PaymentTable payment_table(const pma_instance* h, const json& opt) {
  const std::string dir = opt.value("cache_dir", std::string());
  if (dir.empty()) return pma::min_payment_table(h->inst);
  namespace fs = std::filesystem;
  const fs::path path = fs::path(dir) / ("pt-" + pma::digest_hex(h->source) + ".json");
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      return pma::payment_table_from_json(json::parse(in));
    } catch (const std::exception&) {
      // Unreadable cache entries are recomputed.
    }
  }
  auto table = pma::min_payment_table(h->inst);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(path);
  if (out) out << pma::payment_table_to_json(table).dump();
  return table;
}

json verdict_json(const pma::PropertyVerdict& v, pma::Property p) {
  json j{{"property", pma::to_string(p)},
         {"pass", v.pass},
         {"exhaustive", v.exhaustive},
         {"checked", v.checked}};
  if (!v.pass) {
    j["violation"] = v.violation;
    j["witness"] = {{"w", v.w1}, {"w_prime", v.w2}, {"w_second", v.w3}};
  }
  return j;
}

json fosd_json(const pma::FosdVerdict& v) {
  json pairs = json::array();
  for (const auto& p : v.pairs) {
    json e{{"agent", p.agent}, {"lower", p.lower}, {"upper", p.upper}, {"pass", p.pass}};
    if (!p.pass) e["witness_set"] = p.witness_set;
    pairs.push_back(e);
  }
  return {{"pass", v.pass}, {"pairs", pairs}};
}

pma::LinearProgram lp_from_json(const json& j) {
  pma::LinearProgram lp;
  const std::string sense = j.value("sense", std::string("min"));
  if (sense != "min" && sense != "max") throw pma::Error(pma::ErrorCode::kValidation, "sense must be min or max");
  lp.sense = sense == "max" ? pma::Sense::kMax : pma::Sense::kMin;
  for (const auto& c : j.at("objective")) lp.objective.push_back(pma::parse_number(c));
  const size_t nv = lp.objective.size();
  for (const auto& r : j.value("rows", json::array())) {
    pma::LpRow row;
    for (const auto& c : r.at("coef")) row.coef.push_back(pma::parse_number(c));
    if (row.coef.size() != nv) throw pma::Error(pma::ErrorCode::kValidation, "row length differs from objective");
    const std::string rel = r.at("rel").get<std::string>();
    if (rel == "<=") row.rel = pma::Rel::kLe;
    else if (rel == ">=") row.rel = pma::Rel::kGe;
    else if (rel == "=" || rel == "==") row.rel = pma::Rel::kEq;
    else throw pma::Error(pma::ErrorCode::kValidation, "unknown relation " + rel);
    row.rhs = pma::parse_number(r.at("rhs"));
    lp.rows.push_back(std::move(row));
  }
  if (j.contains("lower"))
    for (const auto& v : j["lower"]) lp.lower.push_back(v.is_null() ? -pma::kInf : pma::parse_number(v));
  if (j.contains("upper"))
    for (const auto& v : j["upper"]) lp.upper.push_back(v.is_null() ? pma::kInf : pma::parse_number(v));
  if ((!lp.lower.empty() && lp.lower.size() != nv) || (!lp.upper.empty() && lp.upper.size() != nv))
    throw pma::Error(pma::ErrorCode::kValidation, "bound vectors must match the variable count");
  return lp;
}

pma::Instance instance_from_text(const std::string& text, json* source) {
  json j = json::parse(text);
  pma::Instance inst = pma::instance_from_json(j);
  if (source) *source = std::move(j);
  return inst;
}

}  // namespace

extern "C" {

const char* pma_version(void) { return "1.0.0"; }

const char* pma_last_error(void) { return g_last_error.c_str(); }

void pma_string_free(char* s) { std::free(s); }

pma_status pma_instance_load(const char* json_text, pma_instance** out) {
  return guard([&] {
    require(json_text, "instance text");
    require(out, "output pointer");
    auto h = std::make_unique<pma_instance>();
    h->inst = instance_from_text(json_text, &h->source);
    *out = h.release();
  });
}

void pma_instance_free(pma_instance* inst) { delete inst; }

pma_status pma_instance_to_json(const pma_instance* inst, char** out) {
  return guard([&] {
    require(inst, "instance");
    emit(pma::instance_to_json(inst->inst), out);
  });
}

pma_status pma_validate(const char* json_text, char** report) {
  pma_status status = PMA_OK;
  const pma_status g = guard([&] {
    require(json_text, "instance text");
    json j;
    try {
      j = json::parse(json_text);
    } catch (const json::parse_error& e) {
      status = fail(PMA_ERR_VALIDATION, std::string("malformed JSON: ") + e.what());
      emit({{"valid", false}, {"issues", {std::string("malformed JSON: ") + e.what()}}}, report);
      return;
    }
    json r{{"digest", pma::digest_hex(j)}};
    try {
      const pma::Instance inst = pma::instance_from_json(j);
      int l = 0;
      for (const auto& a : inst.agents) l = std::max(l, a.num_actions());
      r["valid"] = true;
      r["issues"] = json::array();
      r["n"] = inst.n();
      r["l"] = l;
      r["m"] = inst.m();
      r["q"] = inst.q();
      r["reward_family"] = pma::to_string(inst.reward.family);
    } catch (const pma::Error& e) {
      if (e.code() != pma::ErrorCode::kValidation) throw;
      const std::vector<std::string> issues = e.details().empty() ? std::vector<std::string>{e.what()} : e.details();
      r["valid"] = false;
      r["issues"] = issues;
      status = fail(PMA_ERR_VALIDATION, e.what(), issues);
    }
    emit(r, report);
  });
  return g != PMA_OK ? g : status;
}

pma_status pma_check(const pma_instance* inst, const char* options, char** report) {
  return guard([&] {
    require(inst, "instance");
    const json opt = parse_options(options);
    const pma::Instance& in = inst->inst;
    json props = json::array();
    std::vector<std::string> names = opt.value("properties", std::vector<std::string>{"increasing", "dr", "ir"});
    for (const auto& name : names) {
      const auto p = pma::property_from_string(name);
      if (!p) throw pma::Error(pma::ErrorCode::kUsage, "unknown property " + name);
      pma::PropertyOptions po;
      po.exhaustive = opt.value("exhaustive", true);
      po.seed = opt.value("seed", uint64_t{0});
      pma::PropertyVerdict v;
      try {
        v = pma::check_property(in.reward, in, *p, po);
      } catch (const pma::Error& e) {
        if (e.code() != pma::ErrorCode::kRefusal) throw;
        po.exhaustive = false;
        v = pma::check_property(in.reward, in, *p, po);
      }
      props.push_back(verdict_json(v, *p));
    }
    const auto table = pma::min_payment_table(in);
    std::vector<std::vector<int>> inducible(in.n());
    for (int i = 0; i < in.n(); ++i)
      for (int a = 0; a < in.agents[i].num_actions(); ++a)
        if (table[i][a]) inducible[i].push_back(a);
    json r{{"digest", pma::digest_hex(inst->source)},
           {"properties", props},
           {"fosd", fosd_json(pma::check_fosd(in))},
           {"fosd_inducible", fosd_json(pma::check_fosd(in, &inducible))},
           {"inducible", inducible},
           {"payment_bound", pma::payment_bound(table)}};
    if (opt.value("ordered", false)) {
      const auto pp = pma::build_partition_problem(in, &table);
      const auto ov = pma::check_ordered_supermodular(pp, true);
      json o{{"pass", ov.pass}, {"checked", ov.checked}};
      if (!ov.pass) o["witness"] = {{"a", ov.witness_a}, {"b", ov.witness_b}, {"violation", ov.violation}};
      r["ordered_supermodular"] = o;
    }
    emit(r, report);
  });
}

pma_status pma_min_payments(const pma_instance* inst, const char* options, char** out) {
  return guard([&] {
    require(inst, "instance");
    const json opt = parse_options(options);
    const auto table = payment_table(inst, opt);
    emit({{"digest", pma::digest_hex(inst->source)},
          {"table", pma::payment_table_to_json(table)},
          {"payment_bound", pma::payment_bound(table)}},
         out);
  });
}

pma_status pma_solve(const pma_instance* inst, const char* options, char** report) {
  return guard([&] {
    require(inst, "instance");
    const json opt = parse_options(options);
    const std::string method = opt.value("method", std::string("brute"));
    const uint64_t seed = opt.value("seed", uint64_t{0});
    const bool verify = opt.value("verify", true);
    const pma::Instance& in = inst->inst;
    const auto table = payment_table(inst, opt);
    const auto pp = pma::build_partition_problem(in, &table);
    json r{{"method", method}, {"digest", pma::digest_hex(inst->source)}, {"seed", seed}};
    pma::MatroidSolution sol;
    if (method == "brute") {
      sol = pma::brute_force_optimal(pp);
    } else if (method == "ir-fosd") {
      pma::IrFosdOptions o;
      o.verify_fosd = verify;
      o.verify_reward = verify;
      sol = pma::solve_ir_fosd(pp, o);
    } else if (method == "dr-approx") {
      pma::DrOptions o;
      o.eps = opt.value("eps", 0.01);
      o.seed = seed;
      o.verify_reward = verify;
      auto dr = pma::solve_dr(pp, o);
      sol = dr.sol;
      r["eps"] = o.eps;
      r["fractional"] = dr.fractional;
    } else {
      throw pma::Error(pma::ErrorCode::kUsage, "unknown method " + method);
    }
    r["value"] = sol.value;
    r["reward"] = sol.reward;
    r["payment"] = sol.payment;
    r["profile"] = sol.profile;
    r["contract"] = pma::contract_to_json(sol.contract);
    r["recomputed_value"] = pma::principal_utility(in, sol.contract);
    if (opt.value("min_payments", false)) r["min_payments"] = pma::payment_table_to_json(table);
    emit(r, report);
  });
}

pma_status pma_evaluate(const pma_instance* inst, const char* contract, char** report) {
  return guard([&] {
    require(inst, "instance");
    require(contract, "contract");
    const pma::Contract c = pma::contract_from_json(json::parse(contract));
    const pma::Instance& in = inst->inst;
    const double value = pma::principal_utility(in, c);
    std::vector<bool> ic;
    for (int i = 0; i < in.n(); ++i) {
      const auto best = pma::ic_actions(in, i, c.payments[i]);
      ic.push_back(std::find(best.begin(), best.end(), c.recommendations[i]) != best.end());
    }
    emit({{"value", value},
          {"reward", pma::expected_reward_exact(in, c.recommendations)},
          {"payment", pma::expected_payment(in, c)},
          {"incentive_compatible", ic}},
         report);
  });
}

pma_status pma_bayes_load(const char* json_text, pma_bayes_instance** out) {
  return guard([&] {
    require(json_text, "instance text");
    require(out, "output pointer");
    auto h = std::make_unique<pma_bayes_instance>();
    h->source = json::parse(json_text);
    h->bi = pma::bayes_from_json(h->source);
    auto issues = pma::validate_bayes(h->bi);
    if (!issues.empty()) throw pma::Error(pma::ErrorCode::kValidation, "invalid Bayesian instance: " + issues[0], issues);
    *out = h.release();
  });
}

void pma_bayes_free(pma_bayes_instance* inst) { delete inst; }

pma_status pma_bayes_solve(const pma_bayes_instance* inst, const char* options, char** report) {
  return guard([&] {
    require(inst, "instance");
    const json opt = parse_options(options);
    pma::BayesOptions o;
    o.rho = opt.value("rho", 0.05);
    o.seed = opt.value("seed", uint64_t{0});
    o.verify = opt.value("verify", true);
    const std::string oracle = opt.value("oracle", std::string("ir"));
    if (oracle == "ir") o.kind = pma::OracleKind::kIrFosd;
    else if (oracle == "dr") o.kind = pma::OracleKind::kDrApprox;
    else throw pma::Error(pma::ErrorCode::kUsage, "oracle must be ir or dr");
    const auto run = pma::bayes_solve(inst->bi, o);
    const auto ctx = pma::make_context(inst->bi);
    json r{{"method", "bayes-" + oracle},
           {"digest", pma::digest_hex(inst->source)},
           {"seed", o.seed},
           {"rho", o.rho},
           {"value", run.value},
           {"restricted_lp_value", run.lp8_value},
           {"eta", {run.eta_low, run.eta_high}},
           {"binary_steps", run.binary_steps},
           {"ellipsoid_iterations", run.ellipsoid_iterations},
           {"oracle_calls", run.oracle_calls},
           {"cut_count", run.cut_count},
           {"dsic", {{"pass", run.dsic.pass}, {"worst_margin", run.dsic.worst}}},
           {"menu", pma::menu_to_json(ctx, run.menu)}};
    if (opt.value("direct", false)) r["direct_lp_value"] = pma::solve_lp3_direct(ctx).value;
    emit(r, report);
  });
}

pma_status pma_bayes_check_menu(const pma_bayes_instance* inst, const char* menu, double tol, char** report) {
  return guard([&] {
    require(inst, "instance");
    require(menu, "menu");
    const auto ctx = pma::make_context(inst->bi);
    const auto m = pma::menu_from_json(inst->bi, json::parse(menu));
    const auto rep = pma::check_dsic(ctx, m, tol);
    emit({{"pass", rep.pass}, {"worst_margin", rep.worst}, {"value", pma::menu_value(ctx, m)}}, report);
  });
}

pma_status pma_generate(const char* options, char** instance_json) {
  return guard([&] {
    const json opt = parse_options(options);
    const std::string kind = opt.value("kind", std::string("random"));
    pma::GenParams p;
    p.n = opt.value("n", p.n);
    p.l = opt.value("l", p.l);
    p.m = opt.value("m", p.m);
    p.q = opt.value("q", p.q);
    p.family = opt.value("family", p.family);
    p.reward_params = opt.value("params", json::object());
    p.fosd = opt.value("fosd", p.fosd);
    p.seed = opt.value("seed", uint64_t{0});
    if (kind == "random") {
      emit(pma::instance_to_json(pma::gen_random(p)), instance_json);
    } else if (kind == "bayes") {
      const auto bi = pma::gen_bayes_random(p, opt.value("types", 2), opt.value("support", 2));
      emit(pma::bayes_to_json(bi), instance_json);
    } else if (kind == "label-cover") {
      const auto g = pma::parse_label_cover(opt.at("graph").get<std::string>());
      emit(pma::instance_to_json(pma::gen_label_cover(g, opt.value("M", 20.0))), instance_json);
    } else if (kind == "indep-set") {
      int nv = 0;
      const auto edges = pma::parse_edge_list(opt.at("graph").get<std::string>(), &nv);
      emit(pma::instance_to_json(pma::gen_independent_set(opt.value("vertices", nv), edges)), instance_json);
    } else {
      throw pma::Error(pma::ErrorCode::kUsage, "unknown generator " + kind);
    }
  });
}

pma_status pma_oracle_lp(const char* lp_json, const char* options, char** report) {
  return guard([&] {
    require(lp_json, "LP text");
    const json opt = parse_options(options);
    const pma::LinearProgram lp = lp_from_json(json::parse(lp_json));
    const std::string method = opt.value("method", std::string("simplex"));
    if (method == "simplex") {
      const auto res = pma::solve_lp(lp);
      json r{{"method", method}, {"status", pma::to_string(res.status)}, {"iterations", res.iterations}};
      if (res.status == pma::LpStatus::kOptimal) {
        r["value"] = res.value;
        r["x"] = res.x;
        r["dual"] = res.dual;
      } else if (res.status == pma::LpStatus::kInfeasible) {
        r["farkas"] = res.farkas;
      } else if (res.status == pma::LpStatus::kUnbounded) {
        r["ray"] = res.ray;
      }
      emit(r, report);
    } else if (method == "ellipsoid") {
      const double radius = opt.value("radius", 1e4);
      const double tol = opt.value("tol", 1e-7);
      const auto res = pma::ellipsoid_feasibility(lp.num_vars(), radius, pma::make_explicit_oracle(pma::lp_to_cuts(lp)),
                                                  opt.value("max_iters", 0L), tol);
      json r{{"method", method}, {"status", pma::to_string(res.status)}, {"iterations", res.iterations}};
      if (res.status == pma::EllipsoidStatus::kPoint) r["point"] = res.point;
      emit(r, report);
    } else {
      throw pma::Error(pma::ErrorCode::kUsage, "unknown LP method " + method);
    }
  });
}

}  // extern "C"

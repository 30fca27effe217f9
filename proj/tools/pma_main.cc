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


#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pma/pma.h"

using nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{PMA_ERR_USAGE, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure{PMA_ERR_USAGE, "cannot write " + path};
  out << text << "\n";
}

[[noreturn]] void raise(pma_status s) {
  const json err = json::parse(pma_last_error());
  std::string msg = err.value("message", std::string("error"));
  for (const auto& d : err.value("details", std::vector<std::string>{}))
    if (d != msg) msg += "\n  " + d;
  throw Failure{static_cast<int>(s), msg};
}

// Calls a C API function producing a JSON string.
template <class F>
json call(F&& f) {
  char* out = nullptr;
  const pma_status s = f(&out);
  if (s != PMA_OK && !out) raise(s);
  json j = json::parse(out);
  pma_string_free(out);
  if (s != PMA_OK) raise(s);
  return j;
}

struct Instance {
  pma_instance* h = nullptr;
  explicit Instance(const std::string& text) {
    const pma_status s = pma_instance_load(text.c_str(), &h);
    if (s != PMA_OK) raise(s);
  }
  ~Instance() { pma_instance_free(h); }
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;
};

struct Bayes {
  pma_bayes_instance* h = nullptr;
  explicit Bayes(const std::string& text) {
    const pma_status s = pma_bayes_load(text.c_str(), &h);
    if (s != PMA_OK) raise(s);
  }
  ~Bayes() { pma_bayes_free(h); }
  Bayes(const Bayes&) = delete;
  Bayes& operator=(const Bayes&) = delete;
};

std::string cache_dir() {
  const char* d = std::getenv("PMA_CACHE_DIR");
  return d ? d : "";
}

struct Common {
  bool as_json = false;
  bool timing = false;
  uint64_t seed = 0;
};

void print_report(const json& r, const Common& c, double seconds, const std::vector<std::string>& keys) {
  if (c.as_json) {
    json out = r;
    if (c.timing) out["wall_time_s"] = seconds;
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (const auto& k : keys) {
    if (!r.contains(k)) continue;
    const auto& v = r[k];
    std::printf("%-22s %s\n", k.c_str(), v.is_string() ? v.get<std::string>().c_str() : v.dump().c_str());
  }
  std::printf("%-22s %.3f\n", "wall_time_s", seconds);
}

void print_payment_table(const json& table) {
  std::printf("\n%-6s %-6s %-14s %s\n", "agent", "action", "min_payment", "row");
  for (size_t i = 0; i < table.size(); ++i)
    for (size_t a = 0; a < table[i].size(); ++a) {
      const auto& e = table[i][a];
      if (e.is_null())
        std::printf("%-6zu %-6zu %-14s\n", i, a, "not inducible");
      else
        std::printf("%-6zu %-6zu %-14.9g %s\n", i, a, e["min_expected_payment"].get<double>(),
                    e["payment_row"].dump().c_str());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json gen_options(const std::string& kind, int n, int l, int m, int q, const std::string& family, bool no_fosd,
                 uint64_t seed) {
  return {{"kind", kind}, {"n", n}, {"l", l}, {"m", m}, {"q", q}, {"family", family}, {"fosd", !no_fosd},
          {"seed", seed}};
}

// One CSV row per seed: method, value, bound, margin.
std::string bench_row(const std::string& kind, uint64_t seed, double eps, double rho) {
  std::ostringstream row;
  if (kind == "bayes") {
    const json opt = {{"kind", "bayes"}, {"n", 2}, {"l", 2 + static_cast<int>(seed % 2)}, {"m", 2}, {"q", 1},
                      {"family", "exp_sum"}, {"fosd", true}, {"seed", seed}, {"types", 2},
                      {"support", 1 + static_cast<int>(seed % 3)}};
    const json inst = call([&](char** o) { return pma_generate(opt.dump().c_str(), o); });
    Bayes b(inst.dump());
    const json r = call([&](char** o) {
      return pma_bayes_solve(b.h, json{{"rho", rho}, {"seed", seed}, {"direct", true}}.dump().c_str(), o);
    });
    const double bound = r["direct_lp_value"].get<double>() - rho;
    row << seed << ",bayes-ir," << r["value"].get<double>() << "," << bound << "," << r["value"].get<double>() - bound;
    return row.str();
  }
  const bool ir = kind == "ir";
  const int n = 1 + static_cast<int>(seed % 3);
  const json opt = ir ? gen_options("random", n, 1 + static_cast<int>(seed / 3 % 3), 2 + static_cast<int>(seed % 2), 1,
                                    "exp_sum", false, seed)
                      : gen_options("random", n, 2 + static_cast<int>(seed % 2), 3, 2,
                                    seed % 2 ? "coverage_max" : "budget_additive", false, seed);
  const json inst = call([&](char** o) { return pma_generate(opt.dump().c_str(), o); });
  Instance h(inst.dump());
  const json brute = call([&](char** o) { return pma_solve(h.h, R"({"method":"brute"})", o); });
  const json sol = call([&](char** o) {
    return pma_solve(h.h, json{{"method", ir ? "ir-fosd" : "dr-approx"}, {"eps", eps}, {"seed", seed}}.dump().c_str(), o);
  });
  const double bound = ir ? brute["value"].get<double>()
                          : (1.0 - std::exp(-1.0)) * brute["reward"].get<double>() - brute["payment"].get<double>() - eps;
  row << seed << "," << (ir ? "ir-fosd" : "dr-approx") << "," << sol["value"].get<double>() << "," << bound << ","
      << sol["value"].get<double>() - bound;
  return row.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent hidden-action contract design"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pma_version()));
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", common.as_json, "Machine-readable JSON report");
    sub->add_flag("--timing", common.timing, "Include wall time in JSON reports");
    sub->add_option("--seed", common.seed, "Master seed");
  };

  std::string file, out_path;

  auto* validate = app.add_subcommand("validate", "Validate an instance file");
  validate->add_option("file", file)->required();
  add_common(validate);

  auto* check = app.add_subcommand("check", "Reward property, FOSD and inducibility checks");
  check->add_option("file", file)->required();
  std::vector<std::string> properties{"increasing", "dr", "ir"};
  bool sampled = false, exhaustive = false, ordered = false;
  check->add_option("--property,--properties", properties, "Any of increasing, dr, ir, fosd (repeatable)")
      ->check(CLI::IsMember({"increasing", "dr", "ir", "dr_submodular", "ir_supermodular", "fosd"}));
  auto* sampled_flag = check->add_flag("--sampled", sampled, "Sampled instead of exhaustive property checks");
  check->add_flag("--exhaustive", exhaustive, "Exhaustive property checks (default)")->excludes(sampled_flag);
  check->add_flag("--ordered", ordered, "Also check ordered supermodularity of the matroid objective");
  add_common(check);

  auto* solve = app.add_subcommand("solve", "Compute a contract");
  solve->add_option("file", file)->required();
  std::string method = "brute";
  double eps = 0.01;
  bool min_payments = false, trust_tags = false;
  solve->add_option("--method", method)->check(CLI::IsMember({"brute", "ir-fosd", "dr-approx"}));
  solve->add_option("--eps", eps, "Additive accuracy of dr-approx");
  solve->add_flag("--min-payments", min_payments, "Include the minimum-payment table");
  solve->add_option("-o,--output", out_path, "Write the contract JSON here");
  solve->add_flag("--trust-tags", trust_tags, "Skip the reward and FOSD precondition checks");
  add_common(solve);

  auto* bsolve = app.add_subcommand("bayes-solve", "Compute a DSIC menu of randomized contracts");
  bsolve->add_option("file", file)->required();
  double rho = 0.05;
  std::string oracle = "ir";
  bool direct = false;
  bsolve->add_option("--rho", rho, "Additive accuracy");
  bsolve->add_option("--oracle", oracle)->check(CLI::IsMember({"ir", "dr"}));
  bsolve->add_flag("--direct", direct, "Also solve the exact menu LP directly");
  bsolve->add_option("-o,--output", out_path, "Write the menu JSON here");
  bsolve->add_flag("--trust-tags", trust_tags, "Skip the reward and FOSD precondition checks");
  add_common(bsolve);

  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  int n = 2, l = 3, m = 3, q = 1, types = 0, support = 2;
  std::string family = "exp_sum", graph_path;
  bool no_fosd = false;
  double smoothing = 20.0;
  auto* gen_random = gen->add_subcommand("random", "Seeded random instance");
  gen_random->add_option("--n", n);
  gen_random->add_option("--l", l);
  gen_random->add_option("--m", m);
  gen_random->add_option("--q", q);
  gen_random->add_option("--family", family)->check(CLI::IsMember({"exp_sum", "budget_additive", "coverage_max", "linear"}));
  gen_random->add_flag("--no-fosd", no_fosd, "Independent random distributions");
  gen_random->add_option("--types", types, "Emit a Bayesian instance with this many types");
  gen_random->add_option("--support", support, "Support size of the Bayesian prior");
  auto* gen_label = gen->add_subcommand("label-cover", "Smoothed label-cover gadget");
  gen_label->add_option("graph", graph_path, "Header 'U V labels', then 'u v pi_0 ...' lines")->required();
  gen_label->add_option("--M", smoothing, "Smoothing parameter");
  auto* gen_is = gen->add_subcommand("indep-set", "Independent-set gadget");
  gen_is->add_option("graph", graph_path, "Edge list, one 'u v' pair per line")->required();
  for (auto* g : {gen_random, gen_label, gen_is}) {
    g->add_option("--seed", common.seed);
    g->add_option("-o,--output", out_path)->required();
  }

  auto* orc = app.add_subcommand("oracle", "Stand-alone solver kernels");
  orc->require_subcommand(1);
  auto* orc_lp = orc->add_subcommand("lp", "Solve an LP file");
  std::string lp_method = "simplex";
  orc_lp->add_option("file", file)->required();
  orc_lp->add_option("--method", lp_method)->check(CLI::IsMember({"simplex", "ellipsoid"}));
  add_common(orc_lp);

  auto* bench = app.add_subcommand("bench", "Acceptance-style comparisons as CSV");
  std::string bench_kind = "ir";
  int count = 20, jobs = 1;
  bench->add_option("--kind", bench_kind)->check(CLI::IsMember({"ir", "dr", "bayes"}));
  bench->add_option("--count", count);
  bench->add_option("--jobs", jobs);
  bench->add_option("--eps", eps);
  bench->add_option("--rho", rho);
  bench->add_option("--seed", common.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return PMA_ERR_USAGE;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*validate) {
      const json r = call([&](char** o) { return pma_validate(read_file(file).c_str(), o); });
      print_report(r, common, seconds_since(t0), {"valid", "digest", "n", "l", "m", "q", "reward_family"});
    } else if (*check) {
      Instance h(read_file(file));
      std::vector<std::string> reward_props;
      for (const auto& p : properties)
        if (p != "fosd") reward_props.push_back(p);
      const json opt = {{"properties", reward_props}, {"exhaustive", !sampled}, {"seed", common.seed}, {"ordered", ordered}};
      json r = call([&](char** o) { return pma_check(h.h, opt.dump().c_str(), o); });
      r["command"] = "check";
      if (common.as_json) {
        print_report(r, common, seconds_since(t0), {});
      } else {
        for (const auto& p : r["properties"])
          std::printf("%-16s %s (%s, %ld tuples)\n", p["property"].get<std::string>().c_str(),
                      p["pass"].get<bool>() ? "PASS" : "FAIL", p["exhaustive"].get<bool>() ? "exhaustive" : "sampled",
                      p["checked"].get<long>());
        std::printf("%-16s %s\n", "fosd", r["fosd"]["pass"].get<bool>() ? "PASS" : "FAIL");
        std::printf("%-16s %s\n", "fosd_inducible", r["fosd_inducible"]["pass"].get<bool>() ? "PASS" : "FAIL");
        if (r.contains("ordered_supermodular"))
          std::printf("%-16s %s\n", "ordered", r["ordered_supermodular"]["pass"].get<bool>() ? "PASS" : "FAIL");
        std::printf("%-16s %s\n", "inducible", r["inducible"].dump().c_str());
      }
    } else if (*solve) {
      Instance h(read_file(file));
      const json opt = {{"method", method}, {"eps", eps}, {"seed", common.seed}, {"min_payments", min_payments},
                        {"cache_dir", cache_dir()}, {"verify", !trust_tags}};
      json r = call([&](char** o) { return pma_solve(h.h, opt.dump().c_str(), o); });
      r["command"] = "solve";
      r["tolerances"] = {{"ic_tie", 1e-9}, {"ic_slack", 1e-7}};
      if (!out_path.empty()) {
        write_file(out_path, r["contract"].dump(2));
        r["artifact"] = out_path;
      }
      print_report(r, common, seconds_since(t0),
                   {"command", "method", "digest", "value", "reward", "payment", "profile", "recomputed_value",
                    "artifact"});
      if (min_payments && !common.as_json) print_payment_table(r["min_payments"]);
    } else if (*bsolve) {
      Bayes h(read_file(file));
      const json opt = {{"rho", rho}, {"oracle", oracle}, {"seed", common.seed}, {"direct", direct},
                        {"verify", !trust_tags}};
      json r = call([&](char** o) { return pma_bayes_solve(h.h, opt.dump().c_str(), o); });
      r["command"] = "bayes-solve";
      if (!out_path.empty()) {
        write_file(out_path, r["menu"].dump(2));
        r["artifact"] = out_path;
      }
      print_report(r, common, seconds_since(t0),
                   {"command", "method", "digest", "value", "restricted_lp_value", "direct_lp_value", "eta",
                    "binary_steps", "ellipsoid_iterations", "oracle_calls", "cut_count", "dsic", "artifact"});
    } else if (*gen) {
      json opt;
      if (*gen_random) {
        opt = gen_options(types > 0 ? "bayes" : "random", n, l, m, q, family, no_fosd, common.seed);
        opt["types"] = types;
        opt["support"] = support;
      } else if (*gen_label) {
        opt = {{"kind", "label-cover"}, {"graph", read_file(graph_path)}, {"M", smoothing}};
      } else {
        opt = {{"kind", "indep-set"}, {"graph", read_file(graph_path)}};
      }
      const json inst = call([&](char** o) { return pma_generate(opt.dump().c_str(), o); });
      write_file(out_path, inst.dump(2));
      std::printf("wrote %s\n", out_path.c_str());
    } else if (*orc_lp) {
      const json opt = {{"method", lp_method}};
      json r = call([&](char** o) { return pma_oracle_lp(read_file(file).c_str(), opt.dump().c_str(), o); });
      print_report(r, common, seconds_since(t0), {"method", "status", "value", "x", "point", "iterations"});
    } else if (*bench) {
      if (count < 0 || jobs < 1) throw Failure{PMA_ERR_USAGE, "count must be >= 0 and jobs >= 1"};
      std::vector<std::string> rows(count);
      std::vector<Failure> errors(count, Failure{0, ""});
      std::vector<std::thread> pool;
      for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
          for (int k = w; k < count; k += jobs) {
            try {
              rows[k] = bench_row(bench_kind, common.seed + static_cast<uint64_t>(k), eps, rho);
            } catch (const Failure& f) {
              errors[k] = f;
            }
          }
        });
      for (auto& t : pool) t.join();
      std::cout << "seed,method,value,bound,margin\n";
      for (int k = 0; k < count; ++k) {
        if (errors[k].code != 0) throw Failure{errors[k].code, "bench seed " + std::to_string(k) + ": " + errors[k].message};
        std::cout << rows[k] << "\n";
      }
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return PMA_ERR_INTERNAL;
  }
  return 0;
}

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


#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pma/pma.h"

namespace {

using nlohmann::json;

const char* kT1 = R"({"q":1,"outcomes":[[0],[1]],"agents":[{"costs":[0,0.5],"dists":[[1,0],[0,1]],"null_action":0}],
  "reward":{"family":"linear","params":{"w":[1]}}})";

json take(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  pma_string_free(s);
  return j;
}

struct Handle {
  pma_instance* h = nullptr;
  explicit Handle(const char* text) { REQUIRE(pma_instance_load(text, &h) == PMA_OK); }
  ~Handle() { pma_instance_free(h); }
};

TEST_CASE("version and error state") {
  CHECK(std::strlen(pma_version()) > 0);
  pma_instance* h = nullptr;
  CHECK(pma_instance_load("{not json", &h) != PMA_OK);
  CHECK(h == nullptr);
  const json err = json::parse(pma_last_error());
  CHECK(err.contains("code"));
  CHECK(err.contains("message"));
  CHECK(pma_instance_load(nullptr, &h) == PMA_ERR_USAGE);
  pma_instance_free(nullptr);
  pma_string_free(nullptr);
}

TEST_CASE("validation reports") {
  char* out = nullptr;
  REQUIRE(pma_validate(kT1, &out) == PMA_OK);
  const json ok = take(out);
  CHECK(ok["valid"] == true);
  CHECK(ok["n"] == 1);
  json bad = json::parse(kT1);
  bad["agents"][0]["dists"][0] = {0.5, 0.0};
  out = nullptr;
  CHECK(pma_validate(bad.dump().c_str(), &out) == PMA_ERR_VALIDATION);
  const json rep = take(out);
  CHECK(rep["valid"] == false);
  CHECK_FALSE(rep["issues"].empty());
  pma_instance* h = nullptr;
  CHECK(pma_instance_load(bad.dump().c_str(), &h) == PMA_ERR_VALIDATION);
  CHECK_FALSE(json::parse(pma_last_error())["details"].empty());
}

TEST_CASE("solve, evaluate and payments") {
  Handle h(kT1);
  char* out = nullptr;
  REQUIRE(pma_solve(h.h, R"({"method":"brute","min_payments":true})", &out) == PMA_OK);
  const json r = take(out);
  CHECK(r["value"].get<double>() == doctest::Approx(0.5));
  CHECK(r["recomputed_value"].get<double>() == doctest::Approx(0.5));
  CHECK(r["min_payments"][0][1]["min_expected_payment"].get<double>() == doctest::Approx(0.5));
  out = nullptr;
  REQUIRE(pma_evaluate(h.h, r["contract"].dump().c_str(), &out) == PMA_OK);
  const json e = take(out);
  CHECK(e["value"].get<double>() == doctest::Approx(0.5));
  CHECK(e["incentive_compatible"][0] == true);
  out = nullptr;
  REQUIRE(pma_solve(h.h, R"({"method":"ir-fosd"})", &out) == PMA_OK);
  CHECK(take(out)["value"].get<double>() == doctest::Approx(0.5));
  out = nullptr;
  REQUIRE(pma_min_payments(h.h, nullptr, &out) == PMA_OK);
  CHECK(take(out)["payment_bound"].get<double>() >= 0.5);
  out = nullptr;
  CHECK(pma_solve(h.h, R"({"method":"magic"})", &out) == PMA_ERR_USAGE);
  CHECK(out == nullptr);
}

TEST_CASE("refusal on failed preconditions") {
  json j = json::parse(kT1);
  j["outcomes"] = {{0.0}, {0.5}, {1.0}};
  j["agents"][0]["costs"] = {0.0, 0.1, 0.2};
  j["agents"][0]["dists"] = {{1, 0, 0}, {0, 1, 0}, {0.5, 0, 0.5}};
  Handle h(j.dump().c_str());
  char* out = nullptr;
  CHECK(pma_solve(h.h, R"({"method":"ir-fosd"})", &out) == PMA_ERR_REFUSAL);
  const json err = json::parse(pma_last_error());
  CHECK(err["code"] == PMA_ERR_REFUSAL);
  CHECK(err["message"].get<std::string>().find("FOSD") != std::string::npos);
  out = nullptr;
  REQUIRE(pma_solve(h.h, R"({"method":"ir-fosd","verify":false})", &out) == PMA_OK);
  pma_string_free(out);
}

TEST_CASE("checks") {
  Handle h(kT1);
  char* out = nullptr;
  REQUIRE(pma_check(h.h, R"({"ordered":true})", &out) == PMA_OK);
  const json r = take(out);
  CHECK(r["properties"].size() == 3);
  CHECK(r["fosd"]["pass"] == true);
  CHECK(r["ordered_supermodular"]["pass"] == true);
}

TEST_CASE("generators and the bayesian pipeline") {
  char* out = nullptr;
  REQUIRE(pma_generate(R"({"kind":"bayes","n":2,"l":2,"m":2,"types":2,"support":2,"seed":3})", &out) == PMA_OK);
  const json inst = take(out);
  pma_bayes_instance* b = nullptr;
  REQUIRE(pma_bayes_load(inst.dump().c_str(), &b) == PMA_OK);
  out = nullptr;
  REQUIRE(pma_bayes_solve(b, R"({"rho":0.05,"direct":true})", &out) == PMA_OK);
  const json r = take(out);
  CHECK(r["value"].get<double>() >= r["direct_lp_value"].get<double>() - 0.05);
  CHECK(r["dsic"]["pass"] == true);
  out = nullptr;
  REQUIRE(pma_bayes_check_menu(b, r["menu"].dump().c_str(), 1e-6, &out) == PMA_OK);
  const json c = take(out);
  CHECK(c["pass"] == true);
  CHECK(c["value"].get<double>() == doctest::Approx(r["value"].get<double>()).epsilon(1e-9));
  pma_bayes_free(b);
  out = nullptr;
  REQUIRE(pma_generate(R"({"kind":"indep-set","graph":"0 1\n1 2\n"})", &out) == PMA_OK);
  const json is = take(out);
  CHECK(is["agents"].size() == 3);
  out = nullptr;
  CHECK(pma_generate(R"({"kind":"nothing"})", &out) == PMA_ERR_USAGE);
}

TEST_CASE("stand-alone LP kernel") {
  const char* lp = R"({"sense":"max","objective":[3,2],"rows":[{"coef":[1,1],"rel":"<=","rhs":4},
    {"coef":[1,3],"rel":"<=","rhs":6}],"upper":[3,10]})";
  char* out = nullptr;
  REQUIRE(pma_oracle_lp(lp, R"({"method":"simplex"})", &out) == PMA_OK);
  const json r = take(out);
  CHECK(r["status"] == "OPTIMAL");
  CHECK(r["value"].get<double>() == doctest::Approx(11.0));
  out = nullptr;
  REQUIRE(pma_oracle_lp(lp, R"({"method":"ellipsoid"})", &out) == PMA_OK);
  CHECK(take(out)["point"].size() == 2);
}

TEST_CASE("instance round trip") {
  Handle h(kT1);
  char* out = nullptr;
  REQUIRE(pma_instance_to_json(h.h, &out) == PMA_OK);
  const json j = take(out);
  Handle again(j.dump().c_str());
  out = nullptr;
  REQUIRE(pma_solve(again.h, nullptr, &out) == PMA_OK);
  CHECK(take(out)["value"].get<double>() == doctest::Approx(0.5));
}

}  // namespace

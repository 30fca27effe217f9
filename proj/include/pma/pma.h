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


// C interface to the multi-agent contract design library. All structured
// inputs and outputs are UTF-8 JSON strings. Returned strings are owned by
// the caller and released with pma_string_free.

#ifndef PMA_PMA_H_
#define PMA_PMA_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PMA_API __declspec(dllexport)
#else
#define PMA_API __attribute__((visibility("default")))
#endif

typedef enum pma_status {
  PMA_OK = 0,
  PMA_ERR_USAGE = 1,
  PMA_ERR_VALIDATION = 2,
  PMA_ERR_REFUSAL = 3,
  PMA_ERR_NUMERICAL = 4,
  PMA_ERR_INTERNAL = 5
} pma_status;

typedef struct pma_instance pma_instance;
typedef struct pma_bayes_instance pma_bayes_instance;

PMA_API const char* pma_version(void);

// Last error of the calling thread as {"code", "message", "details"}.
// The pointer stays valid until the next failing call on this thread.
PMA_API const char* pma_last_error(void);

PMA_API void pma_string_free(char* s);

// Non-Bayesian instances.
PMA_API pma_status pma_instance_load(const char* json_text, pma_instance** out);
PMA_API void pma_instance_free(pma_instance* inst);
PMA_API pma_status pma_instance_to_json(const pma_instance* inst, char** out);

// Report {"valid", "issues", sizes, "digest"}; PMA_ERR_VALIDATION when invalid.
PMA_API pma_status pma_validate(const char* json_text, char** report);

// Property, FOSD and ordered-supermodularity checks.
// options: {"properties": [...], "exhaustive", "seed", "ordered"}.
PMA_API pma_status pma_check(const pma_instance* inst, const char* options, char** report);

// Minimum-payment table. options: {"cache_dir"}.
PMA_API pma_status pma_min_payments(const pma_instance* inst, const char* options, char** out);

// options: {"method": "brute"|"ir-fosd"|"dr-approx", "eps", "seed",
// "min_payments", "cache_dir", "verify"}.
PMA_API pma_status pma_solve(const pma_instance* inst, const char* options, char** report);

// Principal utility of {"payments", "recommendations"} and the IC status of
// each recommendation.
PMA_API pma_status pma_evaluate(const pma_instance* inst, const char* contract, char** report);

// Bayesian instances.
PMA_API pma_status pma_bayes_load(const char* json_text, pma_bayes_instance** out);
PMA_API void pma_bayes_free(pma_bayes_instance* inst);

// options: {"rho", "oracle": "ir"|"dr", "seed", "direct", "verify"}.
PMA_API pma_status pma_bayes_solve(const pma_bayes_instance* inst, const char* options, char** report);

// Checks the DSIC condition of a menu for the instance.
PMA_API pma_status pma_bayes_check_menu(const pma_bayes_instance* inst, const char* menu, double tol,
                                        char** report);

// options: {"kind": "random"|"label-cover"|"indep-set"|"bayes", ...}.
PMA_API pma_status pma_generate(const char* options, char** instance_json);

// Solves an LP given as {"sense", "objective", "rows", "lower", "upper"}.
// options: {"method": "simplex"|"ellipsoid", "radius", "tol"}.
PMA_API pma_status pma_oracle_lp(const char* lp_json, const char* options, char** report);

#ifdef __cplusplus
}
#endif

#endif  // PMA_PMA_H_

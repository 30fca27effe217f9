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

#ifndef PMA_ERROR_HPP_
#define PMA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace pma {

// Values double as CLI exit codes.
enum class ErrorCode {
  kUsage = 1,
  kValidation = 2,
  kRefusal = 3,
  kNumerical = 4,
  kInternal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg, std::vector<std::string> details = {})
      : std::runtime_error(msg), code_(code), details_(std::move(details)) {}
  ErrorCode code() const { return code_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace pma

#endif  // PMA_ERROR_HPP_

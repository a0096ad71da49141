/*
 Copyright 2026 The fundlemma Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fundlemma {

/// Failure categories. Each maps onto one CLI exit code (see tools/).
enum class ErrorKind {
  kInvalidInput,
  kDepthExceedsLength,
  kParse,
  kIo,
  kInsufficientExcitation,
  kInconsistentPast,
  kNoUsableData,
  kInsufficientData,
  kOrderInfeasible,
  kCertificationFailed,
  kRiccatiDivergence,
  kOrderUndetermined,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Throws kInvalidInput with `message` unless `condition` holds.
inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::kInvalidInput, message);
}

}  // namespace fundlemma

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
#include "fundlemma/errors.hpp"

namespace fundlemma {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kDepthExceedsLength: return "depth exceeds length";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kInsufficientExcitation: return "insufficient excitation";
    case ErrorKind::kInconsistentPast: return "inconsistent past";
    case ErrorKind::kNoUsableData: return "no usable data";
    case ErrorKind::kInsufficientData: return "insufficient data";
    case ErrorKind::kOrderInfeasible: return "order infeasible";
    case ErrorKind::kCertificationFailed: return "certification failed";
    case ErrorKind::kRiccatiDivergence: return "riccati divergence";
    case ErrorKind::kOrderUndetermined: return "order undetermined";
  }
  return "unknown error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace fundlemma

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

#include <cmath>
#include <optional>
#include <vector>

#include "fundlemma/ident_missing.hpp"
#include "fundlemma/lti.hpp"

namespace fundlemma::testing {

// Twenty-sample SISO record with samples 5, 12 and 19 lost (NaN).
inline const std::vector<double> kRecordU = {
    1, 0, 2, -1, 0, NAN, 1, 1, -1, -5, 0, -1, NAN, 1, -6, 2, -2, 0, 1, NAN};
inline const std::vector<double> kRecordY = {
    3, 3, 7, 6, 11, NAN, 18, 21, 23, 24, 33, 31, NAN, 30, 20, 26, 14, 10, 3,
    NAN};

inline CorruptedTrajectory missing_record() {
  std::vector<std::optional<IoSample>> entries;
  for (std::size_t t = 0; t < kRecordU.size(); ++t) {
    if (std::isnan(kRecordU[t])) {
      entries.emplace_back(std::nullopt);
    } else {
      entries.push_back(IoSample{Vector::Constant(1, kRecordU[t]),
                                 Vector::Constant(1, kRecordY[t])});
    }
  }
  return CorruptedTrajectory(1, 1, std::move(entries));
}

/// The minimal realization that generated the record.
inline LtiSystem record_system() {
  Matrix A(2, 2), B(2, 1), C(1, 2), D(1, 1);
  A << 1, 0, 1, 1;
  B << 1, 0;
  C << 0, 1;
  D << 1;
  return LtiSystem(A, B, C, D);
}

inline SignalSegment record_input(int first, int last) {
  std::vector<double> v(kRecordU.begin() + first, kRecordU.begin() + last + 1);
  return SignalSegment::scalar(v, first);
}

inline SignalSegment record_output(int first, int last) {
  std::vector<double> v(kRecordY.begin() + first, kRecordY.begin() + last + 1);
  return SignalSegment::scalar(v, first);
}

inline std::vector<IoSegment> record_segments() {
  return {{record_input(0, 4), record_output(0, 4)},
          {record_input(6, 11), record_output(6, 11)},
          {record_input(13, 18), record_output(13, 18)}};
}

}  // namespace fundlemma::testing

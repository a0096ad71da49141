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

#include <span>
#include <vector>

#include "fundlemma/linalg.hpp"

namespace fundlemma {

/// Finite vector-valued sequence f(start), ..., f(start + T - 1); sample t is
/// column t of a d x T matrix.
class SignalSegment {
 public:
  explicit SignalSegment(Matrix samples, int start_time = 0);

  static SignalSegment scalar(const std::vector<double>& values,
                              int start_time = 0);

  const Matrix& samples() const noexcept { return samples_; }
  auto sample(int t) const { return samples_.col(t); }
  int dim() const noexcept { return static_cast<int>(samples_.rows()); }
  int length() const noexcept { return static_cast<int>(samples_.cols()); }
  int start_time() const noexcept { return start_time_; }

  /// Samples [offset, offset + count).
  SignalSegment slice(int offset, int count) const;

 private:
  Matrix samples_;
  int start_time_;
};

/// Depth-k block Hankel matrix: block (r, c) holds sample r + c, giving
/// k*d rows and T - k + 1 columns.
Matrix hankel(const SignalSegment& seg, int depth);

struct MosaicHankel {
  std::vector<Matrix> blocks;
  int depth = 0;
  Matrix assembled;  // blocks side by side, in input order
};

/// Throws kDepthExceedsLength naming the first segment shorter than `depth`.
MosaicHankel mosaic_hankel(std::span<const SignalSegment> segs, int depth);

bool is_persistently_exciting(const SignalSegment& seg, int order,
                              double tol = kDefaultRankTol);

bool is_collectively_pe(std::span<const SignalSegment> segs, int order,
                        double tol = kDefaultRankTol);

/// Largest k for which `seg` is persistently exciting of order k (0 if none).
int pe_order(const SignalSegment& seg, double tol = kDefaultRankTol);

/// Necessary total sample count k(m + q) - q for q segments of m-dimensional
/// inputs to be collectively persistently exciting of order k.
long pe_length_bound(int order, int input_dim, int segment_count);

}  // namespace fundlemma

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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fundlemma/lti.hpp"
#include "fundlemma/willems.hpp"

namespace fundlemma {

struct IoSample {
  Vector u;
  Vector y;
};

/// Record with consecutive time stamps origin, origin+1, ...; a missing
/// entry loses both u and y at that time.
class CorruptedTrajectory {
 public:
  /// Throws kNoUsableData when every entry is missing.
  CorruptedTrajectory(int input_dim, int output_dim,
                      std::vector<std::optional<IoSample>> entries,
                      int origin = 0);

  int m() const noexcept { return m_; }
  int p() const noexcept { return p_; }
  int origin() const noexcept { return origin_; }
  int size() const noexcept { return static_cast<int>(entries_.size()); }
  const std::vector<std::optional<IoSample>>& entries() const noexcept {
    return entries_;
  }

 private:
  int m_;
  int p_;
  int origin_;
  std::vector<std::optional<IoSample>> entries_;
};

struct SegmentSpan {
  int start = 0;
  int length = 0;
};

struct Segmentation {
  std::vector<IoSegment> segments;     // maximal complete runs, time order
  std::vector<SegmentSpan> kept;
  std::vector<SegmentSpan> discarded;  // runs shorter than min_len
};

/// Throws kNoUsableData when every run is shorter than `min_len`.
Segmentation segment_trajectory(const CorruptedTrajectory& ct, int min_len);

struct OrderEstimate {
  int order = 0;
  int depth = 0;  // depth L the estimate was read at
};

/**
 * Behavioral order estimate rank([H_L(u); H_L(y)]) - mL.
 *
 * A depth L is usable when some segment is at least L long, the input mosaic
 * has full row rank mL and the stacked matrix is rank deficient in both rows
 * and columns. The estimate is taken at the largest usable L <= max_depth
 * whose predecessor L - 1 is usable and gives the same value.
 *
 * Throws kOrderUndetermined when no such pair exists.
 */
OrderEstimate estimate_order(std::span<const IoSegment> segments,
                             int max_depth, double tol = kDefaultRankTol);

struct MarkovRecoveryOptions {
  double rank_tol = kDefaultRankTol;
  double residual_tol = 1e-6;
};

/// Impulse responses obtained by data-driven simulation on a depth n + 1
/// dictionary, one run per input channel. Requires the inputs to be
/// collectively persistently exciting of order 2n + 1.
std::vector<Matrix> recover_markov_parameters(
    std::span<const IoSegment> segments, int order, int count,
    const MarkovRecoveryOptions& opts = {});

struct Realization {
  LtiSystem system;
  Vector hankel_singular_values;
  std::vector<std::string> warnings;
};

/// Balanced Ho-Kalman realization of (D, CB, CAB, ...). Needs at least
/// 2 * order + 1 parameters.
Realization ho_kalman(std::span<const Matrix> markov, int order,
                      double tol = kDefaultRankTol);

struct IdentifyOptions {
  int min_segment_length = 2;
  int max_order = 10;
  int markov_count = 0;  // 0 selects 2n + 1
  double rank_tol = kDefaultRankTol;
  double residual_tol = 1e-6;
};

struct IdentificationResult {
  LtiSystem system;
  int order = 0;
  int estimation_depth = 0;
  std::vector<Matrix> markov;
  std::vector<SegmentSpan> segment_report;  // segments in the dictionary
  std::vector<SegmentSpan> discarded;
  double residual = 0.0;  // max |markov(system) - markov|
  std::vector<std::string> warnings;
};

IdentificationResult identify(const CorruptedTrajectory& ct,
                              const IdentifyOptions& opts = {});

}  // namespace fundlemma

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

#include "fundlemma/hankel.hpp"
#include "fundlemma/lti.hpp"

namespace fundlemma {

/// One input/output experiment; both signals cover the same time window.
struct IoSegment {
  SignalSegment input;
  SignalSegment output;
};

/**
 * Stacked input/output mosaic-Hankel matrix of depth L,
 *
 *   [ H_L(u^1) ... H_L(u^q) ]
 *   [ H_L(y^1) ... H_L(y^q) ],
 *
 * whose column span is the set of length-L trajectories of the data-generating
 * system when the inputs are collectively persistently exciting of order n + L.
 */
class DataDictionary {
 public:
  const std::vector<IoSegment>& io_segments() const noexcept {
    return segments_;
  }
  int depth() const noexcept { return depth_; }
  int input_dim() const noexcept { return m_; }
  int output_dim() const noexcept { return p_; }
  int columns() const noexcept { return static_cast<int>(data_.cols()); }
  const Matrix& data_matrix() const noexcept { return data_; }

  auto input_rows() const { return data_.topRows(m_ * depth_); }
  auto output_rows() const { return data_.bottomRows(p_ * depth_); }

 private:
  friend DataDictionary build_data_matrix(std::vector<IoSegment>, int);

  std::vector<IoSegment> segments_;
  int depth_ = 0;
  int m_ = 0;
  int p_ = 0;
  Matrix data_;
};

DataDictionary build_data_matrix(std::vector<IoSegment> io_segments, int depth);

/// Full row rank test of [H_1(x^i_[0,T_i-L]) ...; H_L(u^i) ...], i.e. rank
/// n + mL. State segment i must be as long as input segment i.
bool check_rank_condition(const LtiSystem& sys,
                          std::span<const SignalSegment> state_segments,
                          std::span<const SignalSegment> input_segments,
                          int depth, double tol = kDefaultRankTol);

/// Stacked windows: u is mL, y is pL (sample-major, as in the Hankel rows).
struct WindowTrajectory {
  Vector u;
  Vector y;
};

WindowTrajectory synthesize_trajectory(const DataDictionary& dict,
                                       const Vector& g);

struct Membership {
  bool member = false;
  double residual = 0.0;  // relative
  Vector g;               // minimum-norm coefficients
};

Membership is_system_trajectory(const DataDictionary& dict, const Vector& u,
                                const Vector& y, double tol = 1e-8,
                                double rank_tol = kDefaultRankTol);

struct WindowSpec {
  int past_len = 0;
  int future_len = 1;
};

struct DdSimulateOptions {
  double residual_tol = 1e-6;
  double rank_tol = kDefaultRankTol;
};

/**
 * Continues a trajectory from data alone. `past_u` (m x P) and `past_y`
 * (p x P) must hold P = depth - 1 samples; one output is produced per
 * future input column by solving the known rows of the dictionary for a
 * minimum-norm g and reading the last output block. The window then slides
 * by one sample.
 *
 * Throws kInconsistentPast when a window cannot be explained by the data.
 */
Matrix datadriven_simulate(const DataDictionary& dict, const Matrix& past_u,
                           const Matrix& past_y, const Matrix& future_u,
                           const DdSimulateOptions& opts = {});

}  // namespace fundlemma

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
#include "fundlemma/willems.hpp"

#include <string>

#include "fundlemma/errors.hpp"

namespace fundlemma {

DataDictionary build_data_matrix(std::vector<IoSegment> io_segments,
                                 int depth) {
  require(!io_segments.empty(), "data dictionary needs at least one segment");
  std::vector<SignalSegment> inputs, outputs;
  inputs.reserve(io_segments.size());
  outputs.reserve(io_segments.size());
  for (std::size_t i = 0; i < io_segments.size(); ++i) {
    const auto& seg = io_segments[i];
    require(seg.input.length() == seg.output.length() &&
                seg.input.start_time() == seg.output.start_time(),
            "input/output pair " + std::to_string(i) + " is misaligned");
    inputs.push_back(seg.input);
    outputs.push_back(seg.output);
  }
  const MosaicHankel hu = mosaic_hankel(inputs, depth);
  const MosaicHankel hy = mosaic_hankel(outputs, depth);

  DataDictionary dict;
  dict.depth_ = depth;
  dict.m_ = inputs.front().dim();
  dict.p_ = outputs.front().dim();
  dict.data_.resize(hu.assembled.rows() + hy.assembled.rows(),
                    hu.assembled.cols());
  dict.data_ << hu.assembled, hy.assembled;
  dict.segments_ = std::move(io_segments);
  return dict;
}

bool check_rank_condition(const LtiSystem& sys,
                          std::span<const SignalSegment> state_segments,
                          std::span<const SignalSegment> input_segments,
                          int depth, double tol) {
  require(state_segments.size() == input_segments.size(),
          "need one state segment per input segment");
  for (std::size_t i = 0; i < state_segments.size(); ++i) {
    require(input_segments[i].dim() == sys.m(),
            "input segment " + std::to_string(i) + " has wrong dimension");
    require(state_segments[i].length() == input_segments[i].length(),
            "state segment " + std::to_string(i) + " has wrong length");
  }
  const MosaicHankel hu = mosaic_hankel(input_segments, depth);
  Matrix stacked(sys.n() + hu.assembled.rows(), hu.assembled.cols());
  stacked.bottomRows(hu.assembled.rows()) = hu.assembled;
  if (sys.n() > 0) {
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < state_segments.size(); ++i) {
      require(state_segments[i].dim() == sys.n(),
              "state segment " + std::to_string(i) + " has wrong dimension");
      const auto cols = hu.blocks[i].cols();
      stacked.block(0, col, sys.n(), cols) =
          state_segments[i].samples().leftCols(cols);
      col += cols;
    }
  }
  return numerical_rank(stacked, tol) == stacked.rows();
}

WindowTrajectory synthesize_trajectory(const DataDictionary& dict,
                                       const Vector& g) {
  require(g.size() == dict.columns(),
          "coefficient vector has length " + std::to_string(g.size()) +
              ", dictionary has " + std::to_string(dict.columns()) +
              " columns");
  return {dict.input_rows() * g, dict.output_rows() * g};
}

Membership is_system_trajectory(const DataDictionary& dict, const Vector& u,
                                const Vector& y, double tol,
                                double rank_tol) {
  const int L = dict.depth();
  require(u.size() == dict.input_dim() * L, "input window has wrong length");
  require(y.size() == dict.output_dim() * L, "output window has wrong length");
  Vector w(u.size() + y.size());
  w << u, y;
  Membership out;
  out.g = solve_min_norm(dict.data_matrix(), w, rank_tol);
  out.residual = relative_residual(dict.data_matrix(), out.g, w);
  out.member = out.residual <= tol;
  return out;
}

Matrix datadriven_simulate(const DataDictionary& dict, const Matrix& past_u,
                           const Matrix& past_y, const Matrix& future_u,
                           const DdSimulateOptions& opts) {
  const int L = dict.depth();
  const int m = dict.input_dim();
  const int p = dict.output_dim();
  const int past = L - 1;
  require(past_u.rows() == m && future_u.rows() == m,
          "input samples must have dimension " + std::to_string(m));
  require(past_y.rows() == p,
          "output samples must have dimension " + std::to_string(p));
  require(past_u.cols() == past && past_y.cols() == past,
          "past window must hold depth - 1 = " + std::to_string(past) +
              " samples");

  // Known rows: all L input blocks and the first L-1 output blocks.
  const int known_rows = m * L + p * past;
  Matrix known(known_rows, dict.columns());
  known << dict.input_rows(), dict.output_rows().topRows(p * past);
  const Matrix next_output_rows = dict.output_rows().bottomRows(p);
  const Matrix known_pinv = pseudo_inverse(known, opts.rank_tol);

  const auto steps = future_u.cols();
  Matrix u_window(m, L), y_window(p, past);
  u_window.leftCols(past) = past_u;
  y_window = past_y;

  Matrix future_y(p, steps);
  Vector rhs(known_rows);
  for (Eigen::Index s = 0; s < steps; ++s) {
    u_window.col(past) = future_u.col(s);
    rhs << u_window.reshaped(), y_window.reshaped();
    const Vector g = known_pinv * rhs;
    const double res = relative_residual(known, g, rhs);
    if (res > opts.residual_tol) {
      throw Error(ErrorKind::kInconsistentPast,
                  "window at step " + std::to_string(s) +
                      " is not explained by the data (relative residual " +
                      std::to_string(res) + ")");
    }
    future_y.col(s) = next_output_rows * g;

    if (past > 0) {
      u_window.leftCols(past - 1) = u_window.middleCols(1, past - 1).eval();
      u_window.col(past - 1) = future_u.col(s);
      y_window.leftCols(past - 1) = y_window.middleCols(1, past - 1).eval();
      y_window.col(past - 1) = future_y.col(s);
    }
  }
  return future_y;
}

}  // namespace fundlemma

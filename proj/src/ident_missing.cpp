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
#include "fundlemma/ident_missing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fundlemma/errors.hpp"

namespace fundlemma {

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

std::vector<IoSegment> at_least(std::span<const IoSegment> segments,
                                int length) {
  std::vector<IoSegment> out;
  for (const auto& s : segments) {
    if (s.input.length() >= length) out.push_back(s);
  }
  return out;
}

std::optional<int> order_at_depth(std::span<const IoSegment> segments,
                                  int depth, double tol) {
  auto usable = at_least(segments, depth);
  if (usable.empty()) return std::nullopt;
  const DataDictionary dict = build_data_matrix(std::move(usable), depth);
  const int input_rows = dict.input_dim() * depth;
  if (numerical_rank(dict.input_rows(), tol) < input_rows) return std::nullopt;
  const Matrix& D = dict.data_matrix();
  const int r = numerical_rank(D, tol);
  // A rank equal to either dimension carries no information about the order.
  if (r >= D.rows() || r >= D.cols()) return std::nullopt;
  return r - input_rows;
}

}  // namespace

CorruptedTrajectory::CorruptedTrajectory(
    int input_dim, int output_dim,
    std::vector<std::optional<IoSample>> entries, int origin)
    : m_(input_dim), p_(output_dim), origin_(origin),
      entries_(std::move(entries)) {
  require(m_ >= 1 && p_ >= 1, "trajectory needs m >= 1 and p >= 1");
  bool any = false;
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    if (!entries_[t]) continue;
    any = true;
    require(entries_[t]->u.size() == m_ && entries_[t]->y.size() == p_,
            "sample at t=" + std::to_string(origin_ + static_cast<int>(t)) +
                " has wrong dimensions");
  }
  if (!any) {
    throw Error(ErrorKind::kNoUsableData, "every sample is missing");
  }
}

Segmentation segment_trajectory(const CorruptedTrajectory& ct, int min_len) {
  require(min_len >= 1, "minimum segment length must be positive");
  Segmentation out;
  const auto& e = ct.entries();
  const int T = ct.size();
  int t = 0;
  while (t < T) {
    if (!e[t]) {
      ++t;
      continue;
    }
    int end = t;
    while (end < T && e[end]) ++end;
    const SegmentSpan span{ct.origin() + t, end - t};
    if (span.length < min_len) {
      out.discarded.push_back(span);
    } else {
      Matrix u(ct.m(), span.length), y(ct.p(), span.length);
      for (int k = 0; k < span.length; ++k) {
        u.col(k) = e[t + k]->u;
        y.col(k) = e[t + k]->y;
      }
      out.segments.push_back({SignalSegment(std::move(u), span.start),
                              SignalSegment(std::move(y), span.start)});
      out.kept.push_back(span);
    }
    t = end;
  }
  if (out.segments.empty()) {
    throw Error(ErrorKind::kNoUsableData,
                "no complete run of length >= " + std::to_string(min_len));
  }
  return out;
}

OrderEstimate estimate_order(std::span<const IoSegment> segments,
                             int max_depth, double tol) {
  require(!segments.empty(), "order estimation needs segments");
  if (at_least(segments, 2).empty()) {
    throw Error(ErrorKind::kNoUsableData,
                "order estimation needs a segment of length >= 2");
  }
  std::optional<int> previous;
  std::optional<OrderEstimate> best;
  for (int L = 1; L <= max_depth; ++L) {
    const auto current = order_at_depth(segments, L, tol);
    if (current && previous && *current == *previous) {
      best = OrderEstimate{*current, L};
    }
    previous = current;
  }
  if (!best) {
    throw Error(ErrorKind::kOrderUndetermined,
                "no two consecutive depths <= " + std::to_string(max_depth) +
                    " agree on the order; data insufficiently exciting");
  }
  return *best;
}

std::vector<Matrix> recover_markov_parameters(
    std::span<const IoSegment> segments, int order, int count,
    const MarkovRecoveryOptions& opts) {
  require(!segments.empty(), "markov recovery needs segments");
  require(order >= 0, "order must be nonnegative");
  require(count >= 1, "markov parameter count must be positive");
  const int pe_needed = 2 * order + 1;
  const int depth = order + 1;

  std::vector<SignalSegment> pe_inputs;
  for (const auto& s : segments) {
    if (s.input.length() >= pe_needed) pe_inputs.push_back(s.input);
  }
  if (pe_inputs.empty() ||
      !is_collectively_pe(pe_inputs, pe_needed, opts.rank_tol)) {
    throw Error(ErrorKind::kInsufficientExcitation,
                "inputs are not collectively persistently exciting of order " +
                    std::to_string(pe_needed));
  }

  const DataDictionary dict =
      build_data_matrix(at_least(segments, depth), depth);
  const int m = dict.input_dim();
  const int p = dict.output_dim();
  const Matrix past_u = Matrix::Zero(m, order);
  const Matrix past_y = Matrix::Zero(p, order);

  std::vector<Matrix> markov(count, Matrix::Zero(p, m));
  for (int j = 0; j < m; ++j) {
    Matrix impulse = Matrix::Zero(m, count);
    impulse(j, 0) = 1.0;
    const Matrix response = datadriven_simulate(
        dict, past_u, past_y, impulse, {opts.residual_tol, opts.rank_tol});
    for (int k = 0; k < count; ++k) markov[k].col(j) = response.col(k);
  }
  return markov;
}

Realization ho_kalman(std::span<const Matrix> markov, int order, double tol) {
  require(order >= 0, "order must be nonnegative");
  require(static_cast<int>(markov.size()) >= 2 * order + 1,
          "ho_kalman needs at least 2 * order + 1 = " +
              std::to_string(2 * order + 1) + " markov parameters");
  const Matrix& D = markov.front();
  const auto p = D.rows();
  const auto m = D.cols();
  for (const auto& h : markov) {
    require(h.rows() == p && h.cols() == m,
            "markov parameters must share one shape");
  }

  // Block Hankel of (CB, CAB, ...) and its one-step shift.
  const int available = static_cast<int>(markov.size()) - 1;
  const int block_rows = available / 2;
  const int block_cols = available - block_rows;
  Matrix H0(p * block_rows, m * block_cols);
  Matrix H1(p * block_rows, m * block_cols);
  for (int i = 0; i < block_rows; ++i) {
    for (int j = 0; j < block_cols; ++j) {
      H0.block(i * p, j * m, p, m) = markov[1 + i + j];
      H1.block(i * p, j * m, p, m) = markov[2 + i + j];
    }
  }

  std::vector<std::string> warnings;
  Vector sigma = singular_values(H0);
  const int rank = numerical_rank(H0, tol);
  if (rank < order) {
    throw Error(ErrorKind::kOrderInfeasible,
                "markov hankel has rank " + std::to_string(rank) +
                    ", below the requested order " + std::to_string(order));
  }
  if (rank > order) {
    warnings.push_back("markov hankel has rank " + std::to_string(rank) +
                       " > order " + std::to_string(order) +
                       "; truncating");
  }
  if (order == 0) {
    return {LtiSystem::static_gain(D), std::move(sigma), std::move(warnings)};
  }

  Eigen::BDCSVD<Matrix> svd(H0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector root = svd.singularValues().head(order).cwiseSqrt();
  const Vector inv_root = root.cwiseInverse();
  const Matrix U = svd.matrixU().leftCols(order);
  const Matrix V = svd.matrixV().leftCols(order);
  const Matrix obs = U * root.asDiagonal();
  const Matrix ctrb = root.asDiagonal() * V.transpose();
  const Matrix A =
      inv_root.asDiagonal() * U.transpose() * H1 * V * inv_root.asDiagonal();
  Matrix B = ctrb.leftCols(m);
  Matrix C = obs.topRows(p);
  return {LtiSystem(std::move(A), std::move(B), std::move(C), D),
          std::move(sigma), std::move(warnings)};
}

IdentificationResult identify(const CorruptedTrajectory& ct,
                              const IdentifyOptions& opts) {
  require(opts.max_order >= 0, "max order must be nonnegative");
  const Segmentation seg = run_stage("segment_trajectory", [&] {
    return segment_trajectory(ct, opts.min_segment_length);
  });
  int longest = 0;
  for (const auto& s : seg.kept) longest = std::max(longest, s.length);
  const int max_depth = std::min(opts.max_order + 2, longest);

  const OrderEstimate est = run_stage("estimate_order", [&] {
    return estimate_order(seg.segments, max_depth, opts.rank_tol);
  });
  if (est.order > opts.max_order) {
    throw Error(ErrorKind::kOrderUndetermined,
                "estimate_order: order " + std::to_string(est.order) +
                    " exceeds the maximum " + std::to_string(opts.max_order));
  }
  const int n = est.order;
  const int count = std::max(opts.markov_count, 2 * n + 1);

  std::vector<Matrix> markov = run_stage("recover_markov_parameters", [&] {
    return recover_markov_parameters(seg.segments, n, count,
                                     {opts.rank_tol, opts.residual_tol});
  });
  Realization real =
      run_stage("ho_kalman", [&] { return ho_kalman(markov, n, opts.rank_tol); });

  double residual = 0.0;
  const auto refit = markov_parameters(real.system, count);
  for (int k = 0; k < count; ++k) {
    residual = std::max(residual, (refit[k] - markov[k]).cwiseAbs().maxCoeff());
  }

  IdentificationResult out{std::move(real.system), n, est.depth,
                           std::move(markov), {}, seg.discarded, residual,
                           std::move(real.warnings)};
  for (const auto& s : seg.kept) {
    if (s.length >= n + 1) out.segment_report.push_back(s);
  }
  return out;
}

}  // namespace fundlemma

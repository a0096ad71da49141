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
#include "fundlemma/hankel.hpp"

#include <string>

#include "fundlemma/errors.hpp"

namespace fundlemma {

SignalSegment::SignalSegment(Matrix samples, int start_time)
    : samples_(std::move(samples)), start_time_(start_time) {
  require(samples_.rows() >= 1, "signal segment needs dimension >= 1");
  require(samples_.cols() >= 1, "signal segment needs at least one sample");
}

SignalSegment SignalSegment::scalar(const std::vector<double>& values,
                                    int start_time) {
  Matrix s(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    s(0, static_cast<Eigen::Index>(i)) = values[i];
  }
  return SignalSegment(std::move(s), start_time);
}

SignalSegment SignalSegment::slice(int offset, int count) const {
  require(offset >= 0 && count >= 1 && offset + count <= length(),
          "slice out of range");
  return SignalSegment(samples_.middleCols(offset, count),
                       start_time_ + offset);
}

Matrix hankel(const SignalSegment& seg, int depth) {
  require(depth >= 1, "hankel depth must be positive");
  const int T = seg.length();
  if (depth > T) {
    throw Error(ErrorKind::kDepthExceedsLength,
                "hankel depth " + std::to_string(depth) +
                    " exceeds segment length " + std::to_string(T));
  }
  const int d = seg.dim();
  const int cols = T - depth + 1;
  Matrix H(depth * d, cols);
  for (int c = 0; c < cols; ++c) {
    // Column c is the window f(c), ..., f(c + depth - 1), stacked.
    H.col(c) = seg.samples().middleCols(c, depth).reshaped();
  }
  return H;
}

MosaicHankel mosaic_hankel(std::span<const SignalSegment> segs, int depth) {
  require(!segs.empty(), "mosaic hankel needs at least one segment");
  require(depth >= 1, "hankel depth must be positive");
  const int d = segs.front().dim();
  MosaicHankel out;
  out.depth = depth;
  out.blocks.reserve(segs.size());
  Eigen::Index total_cols = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    require(segs[i].dim() == d, "segment " + std::to_string(i) +
                                    " has dimension " +
                                    std::to_string(segs[i].dim()) +
                                    ", expected " + std::to_string(d));
    if (segs[i].length() < depth) {
      throw Error(ErrorKind::kDepthExceedsLength,
                  "segment " + std::to_string(i) + " (start " +
                      std::to_string(segs[i].start_time()) + ", length " +
                      std::to_string(segs[i].length()) +
                      ") is shorter than depth " + std::to_string(depth));
    }
    out.blocks.push_back(hankel(segs[i], depth));
    total_cols += out.blocks.back().cols();
  }
  out.assembled.resize(static_cast<Eigen::Index>(depth) * d, total_cols);
  Eigen::Index col = 0;
  for (const auto& block : out.blocks) {
    out.assembled.middleCols(col, block.cols()) = block;
    col += block.cols();
  }
  return out;
}

bool is_persistently_exciting(const SignalSegment& seg, int order,
                              double tol) {
  const Matrix H = hankel(seg, order);
  return numerical_rank(H, tol) == H.rows();
}

bool is_collectively_pe(std::span<const SignalSegment> segs, int order,
                        double tol) {
  const MosaicHankel mh = mosaic_hankel(segs, order);
  return numerical_rank(mh.assembled, tol) == mh.assembled.rows();
}

int pe_order(const SignalSegment& seg, double tol) {
  int best = 0;
  for (int k = 1; k <= seg.length(); ++k) {
    // Columns run out before rows once k*d > T - k + 1.
    if (k * seg.dim() > seg.length() - k + 1) break;
    if (!is_persistently_exciting(seg, k, tol)) break;
    best = k;
  }
  return best;
}

long pe_length_bound(int order, int input_dim, int segment_count) {
  require(order >= 1 && input_dim >= 1 && segment_count >= 1,
          "pe_length_bound needs positive arguments");
  return static_cast<long>(order) * (input_dim + segment_count) -
         segment_count;
}

}  // namespace fundlemma

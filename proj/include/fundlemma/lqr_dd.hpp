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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fundlemma/hankel.hpp"
#include "fundlemma/lti.hpp"

namespace fundlemma {

/// One input/state experiment: states hold T + 1 samples, inputs T.
struct Experiment {
  SignalSegment states;
  SignalSegment inputs;
};

/// X_- = [x(0) .. x(T-1)], X_+ = [x(1) .. x(T)], U_- = [u(0) .. u(T-1)],
/// concatenated over experiments in order.
struct ExperimentBatch {
  Matrix Xm;
  Matrix Xp;
  Matrix Um;
  std::vector<int> offsets;  // first column of each experiment

  int n() const noexcept { return static_cast<int>(Xm.rows()); }
  int m() const noexcept { return static_cast<int>(Um.rows()); }
  int columns() const noexcept { return static_cast<int>(Xm.cols()); }
};

ExperimentBatch assemble_batch(std::span<const Experiment> experiments);

struct LqrWeights {
  Matrix Q;  // symmetric PSD
  Matrix R;  // symmetric PD

  static LqrWeights identity(int n, int m);
  /// Throws kInvalidInput unless Q is symmetric PSD and R symmetric PD.
  void validate() const;
};

enum class RiccatiMethod {
  kDoubling,        // falls back to value iteration on failure
  kValueIteration,
};

struct RiccatiOptions {
  double tol = 1e-10;  // relative Frobenius residual accepted
  int max_iter = 10000;
  RiccatiMethod method = RiccatiMethod::kDoubling;
};

struct RiccatiSolution {
  Matrix P;
  Matrix K;  // u = K x
  double residual = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

/**
 * Stabilizing solution of
 *
 *   P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q
 *
 * by the structure-preserving doubling algorithm, falling back to the
 * value iteration P <- Ric(P) from P = Q. K = -(R + B'PB)^{-1} B'PA.
 */
RiccatiSolution dare_solve(const Matrix& A, const Matrix& B, const Matrix& Q,
                           const Matrix& R, const RiccatiOptions& opts = {});

/// L(P) = Xm'P Xm - Xp'P Xp - Xm'Q Xm - Um'R Um, symmetrized.
Matrix lmi_operator(const Matrix& P, const ExperimentBatch& batch,
                    const LqrWeights& weights);

/// Least-squares fit Xp = [A B] [Xm; Um]. Throws kInsufficientData when
/// [Xm; Um] lacks full row rank.
std::pair<Matrix, Matrix> identify_ab(const ExperimentBatch& batch,
                                      double tol = kDefaultRankTol);

struct LqrOptions {
  double rank_tol = kDefaultRankTol;
  double cert_tol = 1e-6;  // relative to the scale of L(P)
  RiccatiOptions riccati;
};

struct LqrSolution {
  Matrix P;
  Matrix K;
  double lmi_max_eig = 0.0;     // largest eigenvalue of L(P)
  double lmi_scale = 0.0;       // normalization used for certification
  double riccati_residual = 0.0;
  double right_inverse_residual = 0.0;
  double closed_loop_radius = 0.0;
  Matrix A_identified;
  Matrix B_identified;
};

/**
 * Data-driven LQR. P is the largest Riccati solution of the (exactly
 * identified) data-generating pair, certified against the data-side
 * constraint L(P) <= 0. The gain is K = Um X where X solves
 * [Xm; L(P)] X = [I; 0] in the minimum-norm sense.
 *
 * Throws kInsufficientData on rank deficiency of [Xm; Um] and
 * kCertificationFailed when any certificate is violated.
 */
LqrSolution lqr_from_data(const ExperimentBatch& batch,
                          const LqrWeights& weights,
                          const LqrOptions& opts = {});

/// SDPA sparse (.dat-s) encoding of: max tr P s.t. P >= 0, -L(P) >= 0.
void export_sdp(const ExperimentBatch& batch, const LqrWeights& weights,
                std::ostream& out);
std::string export_sdp(const ExperimentBatch& batch, const LqrWeights& weights);

struct InstabilityReport {
  std::vector<double> state_norms;  // ||x(t)||, t = 0..T
  double max_norm = 0.0;
};

InstabilityReport instability_report(const LtiSystem& sys, const Vector& x0,
                                     const Matrix& u);

/// Discretized batch reactor (0.5 s sampling), with C = I and D = 0.
LtiSystem batch_reactor();

struct ExperimentDesign {
  int count = 5;
  int length = 6;
  int pe_order = 5;  // collective PE order demanded of the inputs
  int max_retries = 100;
};

/// Simulates `design.count` experiments from x0 ~ U[0,1]^n with inputs
/// ~ U[0,1], redrawing the inputs until they are collectively persistently
/// exciting of `design.pe_order`. Throws kInsufficientExcitation after
/// `max_retries` failed draws.
std::vector<Experiment> random_experiments(const LtiSystem& sys,
                                           const ExperimentDesign& design,
                                           std::uint64_t seed,
                                           double rank_tol = kDefaultRankTol);

}  // namespace fundlemma

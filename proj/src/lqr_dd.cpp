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
#include "fundlemma/lqr_dd.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "fundlemma/errors.hpp"

namespace fundlemma {

namespace {

Matrix riccati_map(const Matrix& A, const Matrix& B, const Matrix& Q,
                   const Matrix& R, const Matrix& P) {
  const Matrix S = R + B.transpose() * P * B;
  const Matrix BtPA = B.transpose() * P * A;
  return symmetrize(A.transpose() * P * A -
                    BtPA.transpose() * S.llt().solve(BtPA) + Q);
}

Matrix riccati_gain(const Matrix& A, const Matrix& B, const Matrix& R,
                    const Matrix& P) {
  const Matrix S = R + B.transpose() * P * B;
  return -S.llt().solve(B.transpose() * P * A);
}

double riccati_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                        const Matrix& R, const Matrix& P) {
  const double scale = P.norm();
  const double r = (riccati_map(A, B, Q, R, P) - P).norm();
  return scale > 0.0 ? r / scale : r;
}

bool all_finite(const Matrix& M) { return M.array().isFinite().all(); }

// Structure-preserving doubling; returns false on breakdown.
bool doubling(const Matrix& A, const Matrix& B, const Matrix& Q,
              const Matrix& R, int max_iter, Matrix& P, int& iterations) {
  const auto n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  Matrix Ak = A;
  Matrix Gk = symmetrize(B * R.llt().solve(B.transpose()));
  Matrix Hk = Q;
  for (iterations = 1; iterations <= max_iter; ++iterations) {
    const Eigen::PartialPivLU<Matrix> W(I + Gk * Hk);
    const Matrix WinvA = W.solve(Ak);
    const Matrix WinvG = W.solve(Gk);
    const Matrix Anext = Ak * WinvA;
    const Matrix Gnext = symmetrize(Gk + Ak * WinvG * Ak.transpose());
    const Matrix Hnext = symmetrize(Hk + Ak.transpose() * Hk * WinvA);
    if (!all_finite(Anext) || !all_finite(Gnext) || !all_finite(Hnext)) {
      return false;
    }
    const double change = (Hnext - Hk).norm();
    const double size = std::max(Hnext.norm(), 1.0);
    Ak = Anext;
    Gk = Gnext;
    Hk = Hnext;
    if (change <= 1e-15 * size) break;
  }
  P = Hk;
  return iterations <= max_iter;
}

bool value_iteration(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, double tol, int max_iter, Matrix& P,
                     int& iterations) {
  P = Q;
  for (iterations = 1; iterations <= max_iter; ++iterations) {
    const Matrix next = riccati_map(A, B, Q, R, P);
    if (!all_finite(next)) return false;
    const double change = (next - P).norm();
    P = next;
    if (change <= tol * std::max(P.norm(), 1.0)) return true;
  }
  return false;
}

double min_eigenvalue(const Matrix& S) {
  if (S.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double max_eigenvalue(const Matrix& S) {
  if (S.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

}  // namespace

ExperimentBatch assemble_batch(std::span<const Experiment> experiments) {
  require(!experiments.empty(), "experiment batch needs an experiment");
  const int n = experiments.front().states.dim();
  const int m = experiments.front().inputs.dim();
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    const auto& e = experiments[i];
    require(e.states.dim() == n && e.inputs.dim() == m,
            "experiment " + std::to_string(i) + " has inconsistent dimensions");
    require(e.states.length() == e.inputs.length() + 1,
            "experiment " + std::to_string(i) +
                " needs one more state sample than input samples");
    total += e.inputs.length();
  }
  ExperimentBatch batch;
  batch.Xm.resize(n, total);
  batch.Xp.resize(n, total);
  batch.Um.resize(m, total);
  Eigen::Index col = 0;
  for (const auto& e : experiments) {
    const auto T = e.inputs.length();
    batch.offsets.push_back(static_cast<int>(col));
    batch.Xm.middleCols(col, T) = e.states.samples().leftCols(T);
    batch.Xp.middleCols(col, T) = e.states.samples().rightCols(T);
    batch.Um.middleCols(col, T) = e.inputs.samples();
    col += T;
  }
  return batch;
}

LqrWeights LqrWeights::identity(int n, int m) {
  return {Matrix::Identity(n, n), Matrix::Identity(m, m)};
}

void LqrWeights::validate() const {
  require(Q.rows() == Q.cols(), "Q must be square");
  require(R.rows() == R.cols() && R.rows() >= 1, "R must be square");
  const double qs = std::max(Q.norm(), 1.0);
  require((Q - Q.transpose()).norm() <= 1e-10 * qs, "Q must be symmetric");
  require(min_eigenvalue(Q) >= -1e-12 * qs, "Q must be positive semidefinite");
  require((R - R.transpose()).norm() <= 1e-10 * std::max(R.norm(), 1.0),
          "R must be symmetric");
  require(min_eigenvalue(R) > 0.0, "R must be positive definite");
}

RiccatiSolution dare_solve(const Matrix& A, const Matrix& B, const Matrix& Q,
                           const Matrix& R, const RiccatiOptions& opts) {
  require(A.rows() == A.cols(), "A must be square");
  require(B.rows() == A.rows(), "B must have as many rows as A");
  require(Q.rows() == A.rows() && Q.cols() == A.cols(), "Q must be n x n");
  require(R.rows() == B.cols() && R.cols() == B.cols(), "R must be m x m");
  LqrWeights{Q, R}.validate();

  RiccatiSolution sol;
  const auto accept = [&](const Matrix& P) {
    return riccati_residual(A, B, Q, R, P) <= opts.tol &&
           spectral_radius(A + B * riccati_gain(A, B, R, P)) < 1.0;
  };
  Matrix P;
  int iterations = 0;
  if (opts.method == RiccatiMethod::kDoubling &&
      doubling(A, B, Q, R, std::min(opts.max_iter, 200), P, iterations) &&
      accept(P)) {
    sol.iterations = iterations;
  } else if (value_iteration(A, B, Q, R, 1e-14, opts.max_iter, P,
                             iterations) &&
             accept(P)) {
    sol.iterations = iterations;
    sol.used_fallback = true;
  } else {
    throw Error(ErrorKind::kRiccatiDivergence,
                "no stabilizing Riccati solution within " +
                    std::to_string(opts.max_iter) + " iterations");
  }
  sol.P = P;
  sol.K = riccati_gain(A, B, R, P);
  sol.residual = riccati_residual(A, B, Q, R, P);
  return sol;
}

Matrix lmi_operator(const Matrix& P, const ExperimentBatch& batch,
                    const LqrWeights& weights) {
  const int n = batch.n();
  require(P.rows() == n && P.cols() == n, "P must be n x n");
  require(weights.Q.rows() == n && weights.Q.cols() == n, "Q must be n x n");
  require(weights.R.rows() == batch.m() && weights.R.cols() == batch.m(),
          "R must be m x m");
  const Matrix& Xm = batch.Xm;
  const Matrix& Xp = batch.Xp;
  const Matrix& Um = batch.Um;
  return symmetrize(Xm.transpose() * P * Xm - Xp.transpose() * P * Xp -
                    Xm.transpose() * weights.Q * Xm -
                    Um.transpose() * weights.R * Um);
}

std::pair<Matrix, Matrix> identify_ab(const ExperimentBatch& batch,
                                      double tol) {
  const int n = batch.n();
  const int m = batch.m();
  Matrix Z(n + m, batch.columns());
  Z << batch.Xm, batch.Um;
  // Row scaling keeps the rank decision independent of state magnitudes.
  Vector scale(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const double s = Z.row(i).norm();
    scale(i) = s > 0.0 ? s : 1.0;
  }
  const Matrix Ze = scale.cwiseInverse().asDiagonal() * Z;
  const int rank = numerical_rank(Ze, tol);
  if (rank < n + m) {
    throw Error(ErrorKind::kInsufficientData,
                "[X_-; U_-] has rank " + std::to_string(rank) + " < n + m = " +
                    std::to_string(n + m));
  }
  const Matrix ABe =
      solve_min_norm(Ze.transpose(), batch.Xp.transpose(), tol).transpose();
  const Matrix AB = ABe * scale.cwiseInverse().asDiagonal();
  return {AB.leftCols(n), AB.rightCols(m)};
}

LqrSolution lqr_from_data(const ExperimentBatch& batch,
                          const LqrWeights& weights, const LqrOptions& opts) {
  weights.validate();
  auto [A, B] = identify_ab(batch, opts.rank_tol);
  const RiccatiSolution ric =
      dare_solve(A, B, weights.Q, weights.R, opts.riccati);

  LqrSolution sol;
  sol.P = ric.P;
  sol.riccati_residual = ric.residual;
  const double min_p = min_eigenvalue(sol.P);
  if (min_p < -opts.cert_tol * std::max(sol.P.norm(), 1.0)) {
    throw Error(ErrorKind::kCertificationFailed,
                "P is not positive semidefinite (min eigenvalue " +
                    std::to_string(min_p) + ")");
  }

  const Matrix& Xm = batch.Xm;
  const Matrix& Xp = batch.Xp;
  const Matrix& Um = batch.Um;
  const Matrix Lp = lmi_operator(sol.P, batch, weights);
  sol.lmi_max_eig = max_eigenvalue(Lp);
  sol.lmi_scale = (Xm.transpose() * sol.P * Xm).norm() +
                  (Xp.transpose() * sol.P * Xp).norm() +
                  (Xm.transpose() * weights.Q * Xm).norm() +
                  (Um.transpose() * weights.R * Um).norm();
  if (sol.lmi_scale == 0.0) sol.lmi_scale = 1.0;
  if (sol.lmi_max_eig > opts.cert_tol * sol.lmi_scale) {
    throw Error(ErrorKind::kCertificationFailed,
                "L(P) has positive eigenvalue " +
                    std::to_string(sol.lmi_max_eig) + " (scale " +
                    std::to_string(sol.lmi_scale) + ")");
  }

  // Right inverse of Xm annihilated by L(P); both blocks normalized so the
  // rank cutoff treats them alike.
  const int n = batch.n();
  const int N = batch.columns();
  const double xs = Xm.norm() > 0.0 ? Xm.norm() : 1.0;
  const double ls = Lp.norm() > 0.0 ? Lp.norm() : 1.0;
  Matrix stacked(n + N, N);
  stacked << Xm / xs, Lp / ls;
  Matrix rhs = Matrix::Zero(n + N, n);
  rhs.topRows(n) = Matrix::Identity(n, n) / xs;
  const Matrix right_inverse = solve_min_norm(stacked, rhs, opts.rank_tol);
  sol.right_inverse_residual =
      relative_residual(stacked, right_inverse, rhs);
  if (sol.right_inverse_residual > opts.cert_tol) {
    throw Error(ErrorKind::kCertificationFailed,
                "no right inverse of X_- annihilated by L(P) (residual " +
                    std::to_string(sol.right_inverse_residual) + ")");
  }
  sol.K = Um * right_inverse;
  sol.closed_loop_radius = spectral_radius(A + B * sol.K);
  if (!(sol.closed_loop_radius < 1.0)) {
    throw Error(ErrorKind::kCertificationFailed,
                "closed loop is not stable (spectral radius " +
                    std::to_string(sol.closed_loop_radius) + ")");
  }
  sol.A_identified = std::move(A);
  sol.B_identified = std::move(B);
  return sol;
}

void export_sdp(const ExperimentBatch& batch, const LqrWeights& weights,
                std::ostream& out) {
  const int n = batch.n();
  const int N = batch.columns();
  require(n >= 1 && N >= 1, "cannot export an empty batch");
  weights.validate();
  require(weights.Q.rows() == n && weights.R.rows() == batch.m(),
          "weights do not match the batch dimensions");
  const Matrix& Xm = batch.Xm;
  const Matrix& Xp = batch.Xp;
  const int vars = n * (n + 1) / 2;

  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  const auto emit_block = [&](int mat, int blk, const Matrix& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = i; j < M.cols(); ++j) {
        if (M(i, j) != 0.0) {
          out << mat << ' ' << blk << ' ' << i + 1 << ' ' << j + 1 << ' '
              << num(M(i, j)) << '\n';
        }
      }
    }
  };

  out << "\"max tr(P) s.t. P >= 0, -L(P) >= 0; variables P(i,j), i <= j, "
         "row-major; n = "
      << n << ", N = " << N << "\n";
  out << vars << "\n2\n" << n << ' ' << N << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      out << (i == j ? "-1" : "0") << (i == n - 1 && j == n - 1 ? "\n" : " ");
    }
  }

  // SDPA form: sum_k F_k x_k - F_0 >= 0. Block 2 constant is
  // Xm'Q Xm + Um'R Um, hence F_0 carries its negative.
  const Matrix constant = Xm.transpose() * weights.Q * Xm +
                          batch.Um.transpose() * weights.R * batch.Um;
  emit_block(0, 2, -symmetrize(constant));

  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ++k;
      out << k << " 1 " << i + 1 << ' ' << j + 1 << " 1\n";
      Matrix F = Xp.row(i).transpose() * Xp.row(j) -
                 Xm.row(i).transpose() * Xm.row(j);
      if (i != j) F += F.transpose().eval();
      emit_block(k, 2, symmetrize(F));
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "failed to write SDPA output");
}

std::string export_sdp(const ExperimentBatch& batch,
                       const LqrWeights& weights) {
  std::ostringstream os;
  export_sdp(batch, weights, os);
  return os.str();
}

InstabilityReport instability_report(const LtiSystem& sys, const Vector& x0,
                                     const Matrix& u) {
  const StateTrajectory traj = simulate(sys, x0, u);
  InstabilityReport rep;
  rep.state_norms.reserve(traj.length() + 1);
  for (int t = 0; t < traj.length(); ++t) {
    rep.state_norms.push_back(traj.x.col(t).norm());
  }
  rep.state_norms.push_back(traj.final_state.norm());
  for (double v : rep.state_norms) rep.max_norm = std::max(rep.max_norm, v);
  return rep;
}

LtiSystem batch_reactor() {
  Matrix A(4, 4), B(4, 2);
  A << 2.622, 0.320, 1.834, -1.066,
      -0.238, 0.187, -0.136, 0.202,
      0.161, 0.789, 0.286, 0.606,
      -0.104, 0.764, 0.089, 0.736;
  B << 0.465, -1.550,
      1.314, 0.085,
      2.055, -0.673,
      2.023, -0.160;
  return LtiSystem(A, B, Matrix::Identity(4, 4), Matrix::Zero(4, 2));
}

std::vector<Experiment> random_experiments(const LtiSystem& sys,
                                           const ExperimentDesign& design,
                                           std::uint64_t seed,
                                           double rank_tol) {
  require(design.count >= 1 && design.length >= 1,
          "experiment design needs count >= 1 and length >= 1");
  require(design.pe_order >= 1 && design.pe_order <= design.length,
          "PE order must lie in [1, length]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = unit(rng);
    }
    return M;
  };

  for (int attempt = 0; attempt < design.max_retries; ++attempt) {
    std::vector<Vector> x0s;
    std::vector<SignalSegment> inputs;
    for (int i = 0; i < design.count; ++i) {
      x0s.push_back(draw(sys.n(), 1).col(0));
      inputs.emplace_back(draw(sys.m(), design.length));
    }
    if (!is_collectively_pe(inputs, design.pe_order, rank_tol)) continue;

    std::vector<Experiment> out;
    for (int i = 0; i < design.count; ++i) {
      const StateTrajectory traj = simulate(sys, x0s[i], inputs[i].samples());
      Matrix states(sys.n(), design.length + 1);
      states << traj.x, traj.final_state;
      out.push_back({SignalSegment(std::move(states)), inputs[i]});
    }
    return out;
  }
  throw Error(ErrorKind::kInsufficientExcitation,
              "random inputs failed to be collectively persistently exciting "
              "of order " +
                  std::to_string(design.pe_order) + " after " +
                  std::to_string(design.max_retries) + " draws");
}

}  // namespace fundlemma

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
#include "fundlemma/lti.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "fundlemma/errors.hpp"

namespace fundlemma {

namespace {

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

}  // namespace

LtiSystem::LtiSystem(Matrix A, Matrix B, Matrix C, Matrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  require(A_.rows() == A_.cols(), "A must be square, got " + shape(A_));
  require(D_.rows() >= 1 && D_.cols() >= 1,
          "D must have at least one output and one input, got " + shape(D_));
  const auto n = A_.rows();
  const auto m = D_.cols();
  const auto p = D_.rows();
  require(B_.rows() == n && B_.cols() == m,
          "B must be " + std::to_string(n) + "x" + std::to_string(m) +
              ", got " + shape(B_));
  require(C_.rows() == p && C_.cols() == n,
          "C must be " + std::to_string(p) + "x" + std::to_string(n) +
              ", got " + shape(C_));
}

LtiSystem LtiSystem::static_gain(const Matrix& D) {
  return LtiSystem(Matrix(0, 0), Matrix(0, D.cols()), Matrix(D.rows(), 0), D);
}

StateTrajectory simulate(const LtiSystem& sys, const Vector& x0,
                         const Matrix& u, int start_time) {
  require(x0.size() == sys.n(), "initial state has dimension " +
                                    std::to_string(x0.size()) + ", expected " +
                                    std::to_string(sys.n()));
  require(u.rows() == sys.m(), "input samples have dimension " +
                                   std::to_string(u.rows()) + ", expected " +
                                   std::to_string(sys.m()));
  const auto T = u.cols();
  StateTrajectory traj;
  traj.start_time = start_time;
  traj.u = u;
  traj.x.resize(sys.n(), T);
  traj.y.resize(sys.p(), T);
  Vector x = x0;
  for (Eigen::Index t = 0; t < T; ++t) {
    traj.x.col(t) = x;
    traj.y.col(t) = sys.C() * x + sys.D() * u.col(t);
    x = sys.A() * x + sys.B() * u.col(t);
  }
  traj.final_state = x;
  return traj;
}

bool is_controllable(const Matrix& A, const Matrix& B, double tol) {
  require(A.rows() == A.cols(), "A must be square, got " + shape(A));
  require(B.rows() == A.rows(), "B must have as many rows as A");
  const auto n = A.rows();
  if (n == 0) return true;
  Matrix ctrb(n, n * B.cols());
  Matrix block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * B.cols(), B.cols()) = block;
    block = A * block;
  }
  return numerical_rank(ctrb, tol) == n;
}

bool is_observable(const Matrix& A, const Matrix& C, double tol) {
  require(C.cols() == A.rows(), "C must have as many columns as A has rows");
  return is_controllable(A.transpose(), C.transpose(), tol);
}

std::vector<Matrix> markov_parameters(const LtiSystem& sys, int count) {
  require(count >= 1, "markov parameter count must be positive");
  std::vector<Matrix> out;
  out.reserve(count);
  out.push_back(sys.D());
  Matrix AkB = sys.B();
  for (int k = 1; k < count; ++k) {
    out.push_back(sys.C() * AkB);
    AkB = sys.A() * AkB;
  }
  return out;
}

ResponseMaps response_maps(const LtiSystem& sys, int L) {
  require(L >= 1, "response map depth must be positive");
  const int n = sys.n(), m = sys.m(), p = sys.p();
  ResponseMaps maps;
  maps.observability.resize(p * L, n);
  Matrix CAk = sys.C();
  for (int k = 0; k < L; ++k) {
    maps.observability.middleRows(k * p, p) = CAk;
    CAk = CAk * sys.A();
  }
  const auto markov = markov_parameters(sys, L);
  maps.toeplitz = Matrix::Zero(p * L, m * L);
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c <= r; ++c) {
      maps.toeplitz.block(r * p, c * m, p, m) = markov[r - c];
    }
  }
  return maps;
}

double spectral_radius(const Matrix& M) {
  require(M.rows() == M.cols(), "spectral radius needs a square matrix, got " +
                                    shape(M));
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "eigenvalue computation failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fundlemma

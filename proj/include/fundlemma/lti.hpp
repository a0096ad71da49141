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

#include <vector>

#include "fundlemma/linalg.hpp"

namespace fundlemma {

/**
 * Discrete-time LTI system
 *
 *   x(t+1) = A x(t) + B u(t)
 *   y(t)   = C x(t) + D u(t)
 *
 * with n states, m inputs and p outputs. n = 0 is allowed and gives the
 * static map y = D u.
 */
class LtiSystem {
 public:
  LtiSystem(Matrix A, Matrix B, Matrix C, Matrix D);

  /// Pure feedthrough system with no state.
  static LtiSystem static_gain(const Matrix& D);

  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }
  const Matrix& C() const noexcept { return C_; }
  const Matrix& D() const noexcept { return D_; }

  int n() const noexcept { return static_cast<int>(A_.rows()); }
  int m() const noexcept { return static_cast<int>(B_.cols()); }
  int p() const noexcept { return static_cast<int>(C_.rows()); }

 private:
  Matrix A_, B_, C_, D_;
};

/// Samples are stored column-wise: x is n x T, u is m x T, y is p x T.
struct StateTrajectory {
  Matrix x;
  Matrix u;
  Matrix y;
  Vector final_state;  // x(T)
  int start_time = 0;

  int length() const noexcept { return static_cast<int>(u.cols()); }
};

StateTrajectory simulate(const LtiSystem& sys, const Vector& x0,
                         const Matrix& u, int start_time = 0);

/// Kalman rank test on [B, AB, ..., A^{n-1}B].
bool is_controllable(const Matrix& A, const Matrix& B,
                     double tol = kDefaultRankTol);

/// Dual rank test on [C; CA; ...; CA^{n-1}].
bool is_observable(const Matrix& A, const Matrix& C,
                   double tol = kDefaultRankTol);

/// (D, CB, CAB, ..., CA^{count-2}B).
std::vector<Matrix> markov_parameters(const LtiSystem& sys, int count);

struct ResponseMaps {
  Matrix observability;  // O_L, pL x n
  Matrix toeplitz;       // T_L, pL x mL
};

/// Maps with y_[0,L-1] = O_L x(0) + T_L u_[0,L-1].
ResponseMaps response_maps(const LtiSystem& sys, int L);

/// Largest eigenvalue modulus, computed over the complex field.
double spectral_radius(const Matrix& M);

}  // namespace fundlemma

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

#include <Eigen/Dense>

namespace fundlemma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative singular-value cutoff used for every rank decision in the library.
inline constexpr double kDefaultRankTol = 1e-8;

Vector singular_values(const Matrix& M);

/// Number of singular values strictly above `tol_rel * sigma_max`. Empty and
/// all-zero matrices have rank 0.
int numerical_rank(const Matrix& M, double tol_rel = kDefaultRankTol);

/// Minimum-norm least-squares solution X of A X = B. Singular values of A at
/// or below `tol_rel * sigma_max` are treated as zero.
Matrix solve_min_norm(const Matrix& A, const Matrix& B,
                      double tol_rel = kDefaultRankTol);

/// Moore-Penrose pseudo-inverse with the same truncation rule.
Matrix pseudo_inverse(const Matrix& A, double tol_rel = kDefaultRankTol);

/// ||A X - B||_F / ||B||_F, or the absolute residual when B vanishes.
double relative_residual(const Matrix& A, const Matrix& X, const Matrix& B);

inline Matrix symmetrize(const Matrix& M) {
  return 0.5 * (M + M.transpose());
}

/// Scales every row of M to unit Euclidean norm (zero rows stay zero).
Matrix equilibrate_rows(const Matrix& M);

}  // namespace fundlemma

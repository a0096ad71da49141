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
#include "fundlemma/linalg.hpp"

#include <Eigen/SVD>

namespace fundlemma {

namespace {

using Svd = Eigen::BDCSVD<Matrix>;

Svd thin_svd(const Matrix& M) {
  return Svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

int count_above(const Vector& sigma, double tol_rel) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = tol_rel * sigma(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

Vector singular_values(const Matrix& M) {
  if (M.size() == 0) return Vector(0);
  return Svd(M).singularValues();
}

int numerical_rank(const Matrix& M, double tol_rel) {
  return count_above(singular_values(M), tol_rel);
}

Matrix pseudo_inverse(const Matrix& A, double tol_rel) {
  if (A.size() == 0) return Matrix::Zero(A.cols(), A.rows());
  const Svd svd = thin_svd(A);
  const Vector& sigma = svd.singularValues();
  const int r = count_above(sigma, tol_rel);
  const Matrix V = svd.matrixV().leftCols(r);
  const Matrix U = svd.matrixU().leftCols(r);
  return V * sigma.head(r).cwiseInverse().asDiagonal() * U.transpose();
}

Matrix solve_min_norm(const Matrix& A, const Matrix& B, double tol_rel) {
  return pseudo_inverse(A, tol_rel) * B;
}

double relative_residual(const Matrix& A, const Matrix& X, const Matrix& B) {
  const double r = (A * X - B).norm();
  const double b = B.norm();
  return b > 0.0 ? r / b : r;
}

Matrix equilibrate_rows(const Matrix& M) {
  Matrix out = M;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double s = out.row(i).norm();
    if (s > 0.0) out.row(i) /= s;
  }
  return out;
}

}  // namespace fundlemma

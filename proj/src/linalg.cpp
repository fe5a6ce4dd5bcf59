// Copyright 2026 The SNTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "snth/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "snth/error.hpp"

namespace snth {

Eigen::LLT<Matrix> CheckedCholesky(const Matrix& a, const std::string& what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError(what + ": matrix must be square and non-empty");
  }
  if (!a.allFinite()) throw DomainError(what + ": matrix has non-finite entries");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(what + ": matrix is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw NumericalError(what + ": matrix is numerically singular");
  }
  return llt;
}

bool IsPositiveDefinite(const Matrix& a) {
  if (a.rows() != a.cols() || !a.allFinite()) return false;
  Eigen::LLT<Matrix> llt(a);
  return llt.info() == Eigen::Success;
}

double LogDet(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Matrix CovToCorr(const Matrix& a) {
  const Vector inv_sd = a.diagonal().array().rsqrt();
  Matrix r = inv_sd.asDiagonal() * a * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return 0.5 * (r + r.transpose());
}

Matrix InvSqrtSym(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    throw NumericalError("InvSqrtSym: matrix is not positive definite");
  }
  return es.eigenvectors() *
         es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

void CheckIndex(const Index& idx, int dim, const std::string& what) {
  if (idx.empty()) throw DomainError(what + ": index set is empty");
  std::vector<bool> seen(dim, false);
  for (int i : idx) {
    if (i < 0 || i >= dim) throw DomainError(what + ": index out of range");
    if (seen[i]) throw DomainError(what + ": repeated index");
    seen[i] = true;
  }
}

Index Complement(const Index& idx, int dim) {
  std::vector<bool> in(dim, false);
  for (int i : idx) in[i] = true;
  Index out;
  for (int i = 0; i < dim; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

Vector Select(const Vector& v, const Index& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

Matrix Select(const Matrix& m, const Index& rows, const Index& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

}  // namespace snth

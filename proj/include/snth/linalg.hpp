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

#ifndef SNTH_LINALG_HPP_
#define SNTH_LINALG_HPP_

#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "snth/types.hpp"

namespace snth {

// Index subset of coordinates, zero based.
using Index = std::vector<int>;

// Cholesky factor of a symmetric positive-definite matrix. Throws
// NumericalError when the matrix is not positive definite or its condition
// number exceeds 1e12. `what` names the caller in the message.
Eigen::LLT<Matrix> CheckedCholesky(const Matrix& a, const std::string& what);

// True when `a` admits a Cholesky factorization.
bool IsPositiveDefinite(const Matrix& a);

// log det(A) from its Cholesky factor.
double LogDet(const Eigen::LLT<Matrix>& llt);

// D^{-1/2} A D^{-1/2} with D = diag(A).
Matrix CovToCorr(const Matrix& a);

// Symmetric inverse square root of a positive-definite matrix.
Matrix InvSqrtSym(const Matrix& a);

// Throws DomainError unless every entry is in [0, dim) with no repeats.
void CheckIndex(const Index& idx, int dim, const std::string& what);

// Complement of idx in {0, ..., dim - 1}, in increasing order.
Index Complement(const Index& idx, int dim);

Vector Select(const Vector& v, const Index& idx);
Matrix Select(const Matrix& m, const Index& rows, const Index& cols);

}  // namespace snth

#endif  // SNTH_LINALG_HPP_

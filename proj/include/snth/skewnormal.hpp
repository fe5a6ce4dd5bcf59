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

#ifndef SNTH_SKEWNORMAL_HPP_
#define SNTH_SKEWNORMAL_HPP_

#include <cstdint>
#include <random>

#include "snth/linalg.hpp"
#include "snth/special.hpp"
#include "snth/types.hpp"

namespace snth {

// Skew-normal law in the (xi, Omega, alpha) chart:
//   f(y) = 2 phi_p(y; xi, Omega) Phi(alpha' omega^{-1} (y - xi)),
// with omega = diag(Omega)^{1/2}.
struct AsnParams {
  Vector xi;
  Matrix omega_mat;
  Vector alpha;

  int dim() const { return static_cast<int>(xi.size()); }
  void Validate() const;
};

// Extended skew-normal law in the (xi, Psi, eta, tau) chart. It is the law of
//   xi + tau eta + eta U + W,  U ~ N(0,1) truncated to U > -tau, W ~ N(0, Psi).
// tau = 0 gives the skew-normal SN(xi, Psi, eta).
struct EsnParams {
  Vector xi;
  Matrix psi;
  Vector eta;
  double tau = 0.0;

  int dim() const { return static_cast<int>(xi.size()); }
  void Validate() const;
};

// Two disjoint index blocks covering all coordinates. `block2` holds the
// conditioning coordinates.
struct Split {
  Index block1;
  Index block2;

  void Validate(int dim) const;
};

EsnParams AsnToSn(const AsnParams& p);
AsnParams SnToAsn(const EsnParams& p);

double EsnLogPdf(const Vector& y, const EsnParams& p);

// EsnLogPdf with the factorization of Psi computed once.
class EsnLogDensity {
 public:
  explicit EsnLogDensity(const EsnParams& p);
  double operator()(const Vector& y) const;

 private:
  EsnParams p_;
  Eigen::LLT<Matrix> psi_llt_;
  Vector psi_inv_eta_;
  double one_plus_q_ = 1.0;
  double log_norm_ = 0.0;
};

// Draws n rows. Identical seeds give identical output.
Matrix EsnSample(int n, const EsnParams& p, std::uint64_t seed);

// Same, drawing from a caller-owned generator.
Matrix EsnSample(int n, const EsnParams& p, std::mt19937_64& rng);

// Draw from N(0,1) truncated to (a, inf).
double SampleTruncatedNormal(double a, std::mt19937_64& rng);

EsnParams SnMarginal(const EsnParams& p, const Index& idx);

// Law of Y[block1] given Y[block2] = y2 for Y ~ SN(p).
EsnParams SnConditional(const EsnParams& p, const Split& split,
                        const Vector& y2);

// P(Y <= y) for Y ~ SN(p).
double SnCdf(const Vector& y, const EsnParams& p, const Accuracy& acc = {});

struct SnCanonicalForm {
  // H* such that H* (Y - xi) ~ canon.
  Matrix h_star;
  // SN(0, I, (eta*, 0, ..., 0)).
  EsnParams canon;
};

SnCanonicalForm SnCanonical(const EsnParams& p);

}  // namespace snth

#endif  // SNTH_SKEWNORMAL_HPP_

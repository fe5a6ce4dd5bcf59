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

#ifndef SNTH_SPECIAL_HPP_
#define SNTH_SPECIAL_HPP_

#include <cstdint>

#include "snth/types.hpp"

namespace snth {

// Accuracy controls for iterative and randomized routines.
struct Accuracy {
  double abs_tol = 1e-6;
  int max_iter = 50;
  int qmc_samples = 8192;
  std::uint64_t seed = 0;

  // Throws DomainError if any field is out of range.
  void Validate() const;
};

// Standard normal density, distribution function and friends. These never
// return NaN for finite input.
double NormPdf(double x);
double NormCdf(double x);
double LogNormCdf(double x);
// phi(x) / Phi(x), stable for very negative x.
double InverseMillsRatio(double x);
// Standard normal quantile, p in (0, 1).
double NormQuantile(double p);

// Principal branch of the Lambert W function on [0, inf).
// Throws DomainError for x < 0 or non-finite x.
double LambertW0(double x);

// x * exp(h x^2 / 2). Throws DomainError for h < 0 and OverflowError when the
// result is not representable.
double TukeyH(double x, double h);

// Inverse of TukeyH: z * exp(-W0(h z^2) / 2).
double InvTukeyH(double z, double h);

// log of d/dz InvTukeyH(z, h) = -W0(h z^2)/2 - log1p(W0(h z^2)).
double LogInvTukeyHDerivative(double z, double h);

struct MvnCdfResult {
  double value = 0.0;
  double std_error = 0.0;
};

// P(X <= point) for X ~ N_d(mean, cov). One and two dimensions are computed
// deterministically; three and more use randomized lattice QMC on the
// separation-of-variables integrand, doubling the sample size until the
// reported standard error is below acc.abs_tol (or acc.max_iter doublings).
// Entries of `point` may be +/- infinity.
MvnCdfResult MvnCdfWithError(const Vector& point, const Vector& mean,
                             const Matrix& cov, const Accuracy& acc = {});
double MvnCdf(const Vector& point, const Vector& mean, const Matrix& cov,
              const Accuracy& acc = {});

// P(X <= a, Y <= b) for a standard bivariate normal with correlation r.
double BivariateNormCdf(double a, double b, double r);

// First two raw moments of a N(tau_bar, 1) variable truncated to (0, inf),
// divided by sqrt(1 + alpha_sq) and (1 + alpha_sq) respectively.
struct TruncatedMoments {
  double v1 = 0.0;
  double v2 = 0.0;
};
TruncatedMoments TruncatedNormalMoments(double tau_bar, double alpha_sq);

}  // namespace snth

#endif  // SNTH_SPECIAL_HPP_

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

#ifndef SNTH_ORACLE_HPP_
#define SNTH_ORACLE_HPP_

// Brute-force reference computations used to check the closed forms:
// Monte Carlo moments, Gauss-Legendre quadrature, bisection for Lambert W and
// Kolmogorov-Smirnov tests.

#include <cstdint>
#include <functional>
#include <vector>

#include "snth/types.hpp"

namespace snth::oracle {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Produces n draws (rows) from a fixed seed.
using Sampler = std::function<Matrix(int n, std::uint64_t seed)>;

// Sample means of the monomials prod_j x_j^{powers[j]}, with CLT standard
// errors. Requires n >= 1000.
std::vector<McEstimate> McMoments(const Sampler& sampler, int n,
                                  const std::vector<std::vector<int>>& orders,
                                  std::uint64_t seed = 0);

// Grouped jackknife for a smooth function of feature means. `features` holds
// one row per draw; `stat` receives the column means.
McEstimate Jackknife(const Matrix& features,
                     const std::function<double(const Vector&)>& stat,
                     int groups = 100);

McEstimate SampleMean(const Vector& x);
McEstimate SampleVariance(const Vector& x);
McEstimate SampleCovariance(const Vector& x, const Vector& y);
McEstimate SampleSkewness(const Vector& x);
McEstimate SampleExcessKurtosis(const Vector& x);

// Gauss-Legendre nodes and weights on [a, b].
void GaussLegendre(int nodes, double a, double b, Vector* x, Vector* w);

using LogDensity = std::function<double(const Vector&)>;

// Integral of exp(log_pdf) over the box lower <= x <= upper (dim 1 or 2) by a
// tensor Gauss-Legendre rule with `nodes` points per axis.
double QuadNormalization(const LogDensity& log_pdf, const Vector& lower,
                         const Vector& upper, int nodes);

// Change of variables x_k = map(u_k) applied on each axis of a box in u.
struct AxisMap {
  double lower = 0.0;
  double upper = 0.0;
  std::function<double(double)> map;
  // log |d map / du|.
  std::function<double(double)> log_jacobian;
};

double QuadNormalization(const LogDensity& log_pdf,
                         const std::vector<AxisMap>& axes, int nodes);

// Integral of exp(log_pdf) over the real line, split at `center`, by
// adaptive exp-sinh quadrature on each half line.
double AdaptiveNormalization(const std::function<double(double)>& log_pdf,
                             double center = 0.0, double tol = 1e-12);

// Solution of w exp(w) = x by bisection, to 1e-13.
double W0Reference(double x);

// Asymptotic one-sample KS p-value against a continuous cdf. n >= 20.
double KsTest(const Vector& sample, const std::function<double(double)>& cdf);

// Asymptotic two-sample KS p-value. Each sample needs >= 20 points.
double KsTest(const Vector& a, const Vector& b);

// Kolmogorov survival function P(K > lambda).
double KolmogorovSf(double lambda);

}  // namespace snth::oracle

#endif  // SNTH_ORACLE_HPP_

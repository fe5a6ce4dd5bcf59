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

#ifndef SNTH_SNTH_HPP_
#define SNTH_SNTH_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "snth/skewnormal.hpp"
#include "snth/special.hpp"
#include "snth/types.hpp"

namespace snth {

// Skew-normal-Tukey-h law: Y = xi + omega tau_h(Z), Z ~ SN(0, psi_bar, eta),
// where tau_h applies the Tukey-h transform coordinate-wise.
struct SnthParams {
  Vector xi;
  // Diagonal of the scale matrix.
  Vector omega;
  // Correlation matrix.
  Matrix psi_bar;
  Vector eta;
  Vector h;

  int dim() const { return static_cast<int>(xi.size()); }
  void Validate() const;
  // SN(0, psi_bar, eta).
  EsnParams Latent() const;
};

// Law of xi1 + omega1 tau_h1(Y0) with Y0 ~ base.
struct SnthConditional {
  EsnParams base;
  Vector h1;
  Vector xi1;
  Vector omega1;

  int dim() const { return base.dim(); }
};

// Moments with per-entry existence flags. Entries whose flag is false hold 0
// and must not be used.
struct MomentReport {
  Vector mean;
  Matrix cov;
  std::vector<bool> mean_defined;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> cov_defined;

  bool AllDefined() const;
};

struct SnthDraws {
  Matrix y;
  // Latent skew-normal draws behind each row of y.
  Matrix z;
  // Rows whose transform overflowed; those rows of y hold +/-inf.
  std::vector<int> overflow_rows;
};

SnthDraws SnthSampleDetailed(int n, const SnthParams& p, std::uint64_t seed);

// Throws OverflowError if any draw overflows.
Matrix SnthSample(int n, const SnthParams& p, std::uint64_t seed);

double SnthLogPdf(const Vector& y, const SnthParams& p);

// SnthLogPdf with the latent factorization computed once.
class SnthLogDensity {
 public:
  explicit SnthLogDensity(const SnthParams& p);
  double operator()(const Vector& y) const;

 private:
  SnthParams p_;
  EsnLogDensity latent_;
  double log_scale_ = 0.0;
};

double SnthCdf(const Vector& y, const SnthParams& p, const Accuracy& acc = {});

SnthParams SnthMarginal(const SnthParams& p, const Index& idx);

MomentReport SnthMoments(const SnthParams& p);

struct SkewKurt {
  std::optional<double> gamma1;
  std::optional<double> gamma2;
};

// Pearson skewness and excess kurtosis of the scalar law with skewness eta
// and tail parameter h. Location and scale do not affect either.
SkewKurt SnthSkewKurt(double eta, double h);
SkewKurt SnthSkewKurt(const SnthParams& p);

// Law of Y[block1] given Y[block2] = y2.
SnthConditional SnthCondition(const SnthParams& p, const Split& split,
                              const Vector& y2);

double SnthConditionalLogPdf(const Vector& y1, const SnthConditional& c);

Matrix SnthConditionalSample(int n, const SnthConditional& c,
                             std::uint64_t seed);

MomentReport SnthConditionalMoments(const SnthConditional& c);

struct SnthCanonicalForm {
  Matrix h_star;
  // SNTH(0, 1, I, (eta*, 0, ..., 0), h).
  SnthParams canon;
};

SnthCanonicalForm SnthCanonical(const SnthParams& p);

// Maps an observation y to the canonical coordinates
// tau_h(H* tau_h^{-1}(omega^{-1}(y - xi))).
Vector ToCanonical(const Vector& y, const SnthParams& p,
                   const SnthCanonicalForm& form);

}  // namespace snth

#endif  // SNTH_SNTH_HPP_

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

#ifndef SNTH_INFERENCE_HPP_
#define SNTH_INFERENCE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snth/snth.hpp"
#include "snth/types.hpp"

namespace snth {

// Nested models. kEtaZero fixes eta = 0, kHZero fixes h = 0 (skew-normal),
// kGaussian fixes both.
enum class Submodel { kFull, kEtaZero, kHZero, kGaussian };

enum class Stage { kMarginalEm, kJointMle };

enum class TestMode { kEtaGivenH, kHGivenEta, kJointBonferroni };

struct FitConfig {
  bool do_joint_mle = true;
  double em_rel_tol = 1e-8;
  int em_max_iter = 1000;
  double optimizer_tol = 1e-8;
  int optimizer_max_eval = 20000;
  // Relative finite-difference step for the observed information.
  double hessian_step = 1e-4;
  bool compute_stderr = true;
  Submodel submodel = Submodel::kFull;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Standard errors laid out like SnthParams. Fixed parameters have SE 0.
// Entries flagged in h_unreliable (boundary estimates) hold NaN.
struct SnthStdErrors {
  Vector xi;
  Vector omega;
  Matrix psi_bar;
  Vector eta;
  Vector h;
  std::vector<bool> h_unreliable;
};

struct MarginalFit {
  Vector xi;
  Vector omega;
  Vector eta;
  Vector h;
  Vector loglik;
  // Infinity norm of the gradient of the per-observation log-likelihood at
  // the reported optimum, over the free interior coordinates.
  Vector grad_norm;
  std::vector<bool> converged;
};

struct EmResult {
  // Latent scale matrix before and after correlation normalization.
  Matrix psi_cov;
  Matrix psi_bar;
  // Observed log-likelihood at the start and after every iteration.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

struct FitResult {
  SnthParams params;
  std::optional<SnthStdErrors> stderr_;
  std::string stderr_diagnostic;
  double loglik = 0.0;
  double aic = 0.0;
  int k = 0;
  Stage stage = Stage::kMarginalEm;
  Submodel submodel = Submodel::kFull;
  SnthParams stage1_params;
  double stage1_loglik = 0.0;
  MarginalFit marginals;
  std::vector<double> em_trace;
  int em_iterations = 0;
  bool em_converged = false;
  bool joint_converged = false;
  int joint_evaluations = 0;
  bool converged = false;
  std::string message;
};

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  TestMode mode = TestMode::kEtaGivenH;
  double loglik_null = 0.0;
  double loglik_alt = 0.0;
  // Joint mode only: per-column statistics and p-values.
  std::vector<double> margin_statistics;
  std::vector<double> margin_p_values;
};

// Log-likelihood of the rows of data.
double FullLogLik(const Matrix& data, const SnthParams& p);

// Log-likelihood of a univariate SNTH(xi, omega, 1, eta, h) sample.
double MarginalLogLik(const Vector& col, double xi, double omega, double eta,
                      double h);

// Independent univariate maximum-likelihood fits, one per column.
MarginalFit FitMarginals(const Matrix& data, const FitConfig& cfg);

// Rowwise inverse Tukey-h transform of the standardized data.
Matrix ReconstructLatent(const Matrix& data, const Vector& xi,
                         const Vector& omega, const Vector& h);

// EM estimate of the SN(0, Psi, eta0) scale matrix for rows z.
EmResult EmSnScale(const Matrix& z, const Vector& eta0, const FitConfig& cfg);

// Marginal fits, latent reconstruction and EM, then (optionally) joint
// maximization started from the best of the stage-1 estimate and
// `extra_starts`.
FitResult Fit(const Matrix& data, const FitConfig& cfg,
              const std::vector<SnthParams>& extra_starts = {});

struct StdErrorResult {
  std::optional<SnthStdErrors> se;
  std::string diagnostic;
};

// Observed-information standard errors at p for the given submodel.
StdErrorResult StandardErrors(const Matrix& data, const SnthParams& p,
                              const FitConfig& cfg);

TestResult Lrt(const Matrix& data, TestMode mode, const FitConfig& cfg);

double Aic(double loglik, int k);

// Number of free parameters of a p-dimensional submodel.
int ParameterCount(int p, Submodel submodel);

// Upper tail of the chi-square distribution.
double ChiSquareSf(double x, int df);

const char* ToString(Stage s);
const char* ToString(Submodel s);
const char* ToString(TestMode m);

}  // namespace snth

#endif  // SNTH_INFERENCE_HPP_

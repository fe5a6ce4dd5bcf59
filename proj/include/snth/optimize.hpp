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

#ifndef SNTH_OPTIMIZE_HPP_
#define SNTH_OPTIMIZE_HPP_

#include <functional>

#include "snth/types.hpp"

namespace snth {

// Objective to minimize. May return +inf outside its domain.
using Objective = std::function<double(const Vector&)>;

struct OptimResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  // Convergence: spread of simplex values <= f_tol and simplex diameter
  // <= x_tol.
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  int max_evaluations = 20000;
};

// Nelder-Mead simplex minimization starting from x0 with initial edge
// lengths `step`.
OptimResult NelderMead(const Objective& f, const Vector& x0, const Vector& step,
                       const NelderMeadOptions& opt = {});

struct BfgsOptions {
  // Stops when the relative decrease over an iteration is below f_tol and the
  // gradient infinity norm is below g_tol * max(1, |f|).
  double f_tol = 1e-10;
  double g_tol = 1e-5;
  // Relative step of the central-difference gradient.
  double fd_step = 1e-6;
  int max_evaluations = 20000;
  int max_iterations = 500;
};

// Quasi-Newton minimization with central-difference gradients and Armijo
// backtracking.
OptimResult Bfgs(const Objective& f, const Vector& x0, const BfgsOptions& opt = {});

// Central-difference gradient with per-coordinate step rel * max(1, |x_i|).
Vector NumericalGradient(const Objective& f, const Vector& x, double rel);

// Central-difference Hessian with the same step rule.
Matrix NumericalHessian(const Objective& f, const Vector& x, double rel);

}  // namespace snth

#endif  // SNTH_OPTIMIZE_HPP_

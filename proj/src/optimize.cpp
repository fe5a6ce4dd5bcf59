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

#include "snth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace snth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Sanitize(double v) { return std::isnan(v) ? kInf : v; }

}  // namespace

OptimResult NelderMead(const Objective& f, const Vector& x0, const Vector& step,
                       const NelderMeadOptions& opt) {
  const Eigen::Index n = x0.size();
  std::vector<Vector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  OptimResult r;
  auto eval = [&](const Vector& x) {
    ++r.evaluations;
    return Sanitize(f(x));
  };
  vals[0] = eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts[i + 1](i) += step(i);
    vals[i + 1] = eval(pts[i + 1]);
  }
  std::vector<int> order(n + 1);
  while (r.evaluations < opt.max_evaluations) {
    ++r.iterations;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];

    double diam = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
      diam = std::max(diam, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= opt.f_tol &&
        diam <= opt.x_tol) {
      r.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);

    const Vector xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Vector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    // Contraction, outside or inside.
    const bool outside = fr < vals[worst];
    const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                              : Vector(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  r.x = pts[it - vals.begin()];
  r.value = *it;
  return r;
}

Vector NumericalGradient(const Objective& f, const Vector& x, double rel) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel * std::max(1.0, std::fabs(x(i)));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix NumericalHessian(const Objective& f, const Vector& x, double rel) {
  const Eigen::Index n = x.size();
  Matrix hess(n, n);
  Vector step(n);
  for (Eigen::Index i = 0; i < n; ++i) step(i) = rel * std::max(1.0, std::fabs(x(i)));
  const double f0 = f(x);
  Vector xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    xp(i) = x(i) + step(i);
    const double fp = f(xp);
    xp(i) = x(i) - step(i);
    const double fm = f(xp);
    xp(i) = x(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (step(i) * step(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      double s = 0.0;
      for (int a : {1, -1}) {
        for (int b : {1, -1}) {
          xp(i) = x(i) + a * step(i);
          xp(j) = x(j) + b * step(j);
          s += a * b * f(xp);
        }
      }
      xp(i) = x(i);
      xp(j) = x(j);
      hess(i, j) = hess(j, i) = s / (4.0 * step(i) * step(j));
    }
  }
  return hess;
}

OptimResult Bfgs(const Objective& f, const Vector& x0, const BfgsOptions& opt) {
  const Eigen::Index n = x0.size();
  OptimResult r;
  auto eval = [&](const Vector& x) {
    ++r.evaluations;
    return Sanitize(f(x));
  };
  auto grad = [&](const Vector& x) {
    r.evaluations += 2 * static_cast<int>(n);
    return NumericalGradient([&](const Vector& v) { return Sanitize(f(v)); }, x,
                             opt.fd_step);
  };

  Vector x = x0;
  double fx = eval(x);
  r.x = x;
  r.value = fx;
  if (!std::isfinite(fx) || n == 0) return r;
  Vector g = grad(x);
  Matrix hinv = Matrix::Identity(n, n);
  bool scaled = false;

  while (r.iterations < opt.max_iterations && r.evaluations < opt.max_evaluations) {
    ++r.iterations;
    if (!g.allFinite()) break;
    Vector dir = -hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      // Not a descent direction; fall back to steepest descent.
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    Vector xn;
    double fn = kInf;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      xn = x + t * dir;
      fn = eval(xn);
      if (fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
      continue;
    }
    const Vector gn = grad(xn);
    const Vector s = xn - x;
    const Vector y = gn - g;
    const double rel_drop = (fx - fn) / std::max(1.0, std::fabs(fx));
    x = xn;
    fx = fn;
    g = gn;
    if (rel_drop <= opt.f_tol &&
        g.cwiseAbs().maxCoeff() <= opt.g_tol * std::max(1.0, std::fabs(fx))) {
      r.converged = true;
      break;
    }
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Matrix i_n = Matrix::Identity(n, n);
      hinv = (i_n - rho * s * y.transpose()) * hinv *
                 (i_n - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  r.x = x;
  r.value = fx;
  return r;
}

}  // namespace snth

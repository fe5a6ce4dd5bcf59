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

// Multivariate normal distribution function.
//
// The bivariate routine follows Drezner & Wesolowsky (1990) with the
// refinements of A. Genz for high correlation. Higher dimensions use the
// separation-of-variables transform of Genz (1992) integrated with a
// randomly shifted Richtmyer lattice and the baker's (tent) periodization.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "snth/error.hpp"
#include "snth/special.hpp"

namespace snth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// P(X > dh, Y > dk) for a standard bivariate normal with correlation r.
double BivariateUpper(double dh, double dk, double r) {
  if (dh == kInf || dk == kInf) return 0.0;
  if (dh == -kInf) return dk == -kInf ? 1.0 : NormCdf(-dk);
  if (dk == -kInf) return NormCdf(-dh);
  if (r == 0.0) return NormCdf(-dh) * NormCdf(-dk);

  static constexpr std::array<double, 3> kW6 = {
      0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
  static constexpr std::array<double, 3> kX6 = {
      0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
  static constexpr std::array<double, 6> kW12 = {
      0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
      0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
  static constexpr std::array<double, 6> kX12 = {
      0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
      0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
  static constexpr std::array<double, 10> kW20 = {
      0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
      0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
      0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
      0.1527533871307259};
  static constexpr std::array<double, 10> kX20 = {
      0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
      0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
      0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
      0.07652652113349733};

  const double* w;
  const double* x;
  int lg;
  if (std::fabs(r) < 0.3) {
    w = kW6.data();
    x = kX6.data();
    lg = 3;
  } else if (std::fabs(r) < 0.75) {
    w = kW12.data();
    x = kX12.data();
    lg = 6;
  } else {
    w = kW20.data();
    x = kX20.data();
    lg = 10;
  }

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;
  if (std::fabs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    for (int i = 0; i < lg; ++i) {
      for (const double s : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + s * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return std::clamp(bvn * asr / kTwoPi + NormCdf(-h) * NormCdf(-k), 0.0,
                      1.0);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
             c * d * as * as / 5.0);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(kTwoPi) * NormCdf(-b / a);
      bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    double sum = 0.0;
    for (int i = 0; i < lg; ++i) {
      for (const double s : {-1.0, 1.0}) {
        const double xs = std::pow(a * (1.0 + s * x[i]), 2);
        asr = -0.5 * (bs / xs + hk);
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep =
              std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += w[i] * std::exp(asr) * (sp - ep);
        }
      }
    }
    bvn = (a * sum - bvn) / kTwoPi;
  }
  if (r > 0.0) {
    bvn += NormCdf(-std::max(h, k));
  } else {
    bvn = -bvn + std::max(0.0, NormCdf(-h) - NormCdf(-k));
  }
  return std::clamp(bvn, 0.0, 1.0);
}

std::vector<double> LatticeGenerator(int dim) {
  // Fractional parts of square roots of the first primes.
  static constexpr std::array<int, 40> kPrimes = {
      2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
      47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
      109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173};
  if (dim > static_cast<int>(kPrimes.size())) {
    throw DomainError("MvnCdf: dimension too large for the lattice rule");
  }
  std::vector<double> q(dim);
  for (int i = 0; i < dim; ++i) {
    const double s = std::sqrt(static_cast<double>(kPrimes[i]));
    q[i] = s - std::floor(s);
  }
  return q;
}

// One evaluation of the separation-of-variables integrand at u in [0,1]^{d-1}.
double SovIntegrand(const Matrix& chol, const Vector& upper,
                    const std::vector<double>& u, std::vector<double>& y) {
  const int d = static_cast<int>(upper.size());
  double e = NormCdf(upper(0) / chol(0, 0));
  double f = e;
  for (int i = 1; i < d; ++i) {
    const double p = std::clamp(u[i - 1] * e, 1e-300, 1.0 - 1e-16);
    y[i - 1] = NormQuantile(p);
    double s = 0.0;
    for (int j = 0; j < i; ++j) s += chol(i, j) * y[j];
    e = upper(i) == kInf ? 1.0 : NormCdf((upper(i) - s) / chol(i, i));
    f *= e;
    if (f == 0.0) break;
  }
  return f;
}

}  // namespace

double BivariateNormCdf(double a, double b, double r) {
  if (std::isnan(a) || std::isnan(b) || !(r >= -1.0 && r <= 1.0)) {
    throw DomainError("BivariateNormCdf: invalid argument");
  }
  if (r == 1.0) return NormCdf(std::min(a, b));
  if (r == -1.0) return std::max(0.0, NormCdf(a) + NormCdf(b) - 1.0);
  return BivariateUpper(-a, -b, r);
}

MvnCdfResult MvnCdfWithError(const Vector& point, const Vector& mean,
                             const Matrix& cov, const Accuracy& acc) {
  acc.Validate();
  const Eigen::Index d = point.size();
  if (d < 1) throw DomainError("MvnCdf: dimension must be >= 1");
  if (mean.size() != d || cov.rows() != d || cov.cols() != d) {
    throw DomainError("MvnCdf: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success || !(cov.diagonal().array() > 0.0).all()) {
    throw NumericalError("MvnCdf: covariance is not positive definite");
  }

  Vector upper = point - mean;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::isnan(upper(i))) throw DomainError("MvnCdf: NaN in point");
    if (upper(i) == -kInf) return {0.0, 0.0};
  }
  // Coordinates with an infinite upper limit integrate out.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (upper(i) != kInf) keep.push_back(i);
  }
  if (keep.empty()) return {1.0, 0.0};
  if (static_cast<Eigen::Index>(keep.size()) < d) {
    const auto k = static_cast<Eigen::Index>(keep.size());
    Vector sub_point(k);
    Matrix sub_cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      sub_point(i) = upper(keep[i]);
      for (Eigen::Index j = 0; j < k; ++j) sub_cov(i, j) = cov(keep[i], keep[j]);
    }
    return MvnCdfWithError(sub_point, Vector::Zero(k), sub_cov, acc);
  }

  if (d == 1) return {NormCdf(upper(0) / std::sqrt(cov(0, 0))), 0.0};
  if (d == 2) {
    const double s0 = std::sqrt(cov(0, 0));
    const double s1 = std::sqrt(cov(1, 1));
    const double r = std::clamp(cov(0, 1) / (s0 * s1), -1.0, 1.0);
    return {BivariateNormCdf(upper(0) / s0, upper(1) / s1, r), 0.0};
  }

  const Matrix chol = llt.matrixL();
  const int dim = static_cast<int>(d);
  const std::vector<double> q = LatticeGenerator(dim - 1);
  constexpr int kShifts = 16;
  int per_shift = std::max(1, acc.qmc_samples / kShifts);
  std::mt19937_64 rng(acc.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> u(dim - 1);
  std::vector<double> y(dim - 1);
  std::vector<double> shift(dim - 1);
  MvnCdfResult result;
  for (int round = 0; round < acc.max_iter; ++round) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < kShifts; ++s) {
      for (auto& v : shift) v = unif(rng);
      double est = 0.0;
      for (int k = 1; k <= per_shift; ++k) {
        for (int i = 0; i < dim - 1; ++i) {
          const double t = k * q[i] + shift[i];
          u[i] = std::fabs(2.0 * (t - std::floor(t)) - 1.0);
        }
        est += SovIntegrand(chol, upper, u, y);
      }
      est /= per_shift;
      sum += est;
      sum_sq += est * est;
    }
    const double m = sum / kShifts;
    const double var = std::max(0.0, (sum_sq - kShifts * m * m) / (kShifts - 1));
    result.value = std::clamp(m, 0.0, 1.0);
    result.std_error = std::sqrt(var / kShifts);
    if (result.std_error <= acc.abs_tol || per_shift >= (1 << 20)) break;
    per_shift *= 2;
  }
  return result;
}

double MvnCdf(const Vector& point, const Vector& mean, const Matrix& cov,
              const Accuracy& acc) {
  return MvnCdfWithError(point, mean, cov, acc).value;
}

}  // namespace snth

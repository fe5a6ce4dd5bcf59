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

#include "snth/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "snth/error.hpp"

namespace snth {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Below this point Phi ratios are taken from the continued fraction.
constexpr double kMillsSwitch = -8.0;

// t + k0/(t + (k0+1)/(t + (k0+2)/(t + ...))) for t > 0, by modified Lentz.
double ContinuedFraction(double t, double k0) {
  constexpr double kTiny = 1e-300;
  double f = t;
  double c = f;
  double d = 0.0;
  for (int j = 0; j < 500; ++j) {
    const double a = k0 + j;
    d = t + a * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = t + a / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

// W0(exp(log_x)) for arguments whose exponential overflows.
double LambertW0FromLog(double log_x) {
  double w = log_x - std::log(log_x);
  for (int i = 0; i < 50; ++i) {
    // Newton on w + log(w) - log_x = 0.
    const double dw = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
    w -= dw;
    if (std::fabs(dw) <= 1e-15 * w) break;
  }
  return w;
}

double LambertW0OfHz2(double z, double h) {
  const double a = h * z * z;
  if (std::isfinite(a)) return LambertW0(a);
  return LambertW0FromLog(std::log(h) + 2.0 * std::log(std::fabs(z)));
}

}  // namespace

void Accuracy::Validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("Accuracy: abs_tol must be > 0");
  if (max_iter < 1) throw DomainError("Accuracy: max_iter must be >= 1");
  if (qmc_samples < 1) throw DomainError("Accuracy: qmc_samples must be >= 1");
}

double NormPdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double NormCdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double LogNormCdf(double x) {
  if (x < kMillsSwitch) {
    const double t = -x;
    return -0.5 * x * x - kLogSqrt2Pi - std::log(ContinuedFraction(t, 1.0));
  }
  if (x > 5.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  return std::log(NormCdf(x));
}

double InverseMillsRatio(double x) {
  if (x < kMillsSwitch) return ContinuedFraction(-x, 1.0);
  return NormPdf(x) / NormCdf(x);
}

double NormQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("NormQuantile: p must lie in [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double LambertW0(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("LambertW0: argument must be finite and >= 0, got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < 1e-4) {
    // Series about the origin.
    w = x * (1.0 - x * (1.0 - 1.5 * x));
  } else if (x < 10.0) {
    const double l = std::log1p(x);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley's method on f(w) = w - x exp(-w), which is w e^w - x scaled by
  // e^-w so that nothing overflows.
  for (int i = 0; i < 50; ++i) {
    const double f = w - x * std::exp(-w);
    const double wp1 = w + 1.0;
    const double dw = f / (wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::fabs(dw) <= 4.0 * std::numeric_limits<double>::epsilon() * w) {
      break;
    }
  }
  return w;
}

double TukeyH(double x, double h) {
  if (!(h >= 0.0)) throw DomainError("TukeyH: h must be >= 0");
  if (!std::isfinite(x)) throw DomainError("TukeyH: x must be finite");
  if (h == 0.0 || x == 0.0) return x;
  const double e = 0.5 * h * x * x;
  const double y = x * std::exp(e);
  if (!std::isfinite(y)) {
    throw OverflowError("TukeyH: result overflows for x = " +
                        std::to_string(x) + ", h = " + std::to_string(h));
  }
  return y;
}

double InvTukeyH(double z, double h) {
  if (!(h >= 0.0)) throw DomainError("InvTukeyH: h must be >= 0");
  if (!std::isfinite(z)) throw DomainError("InvTukeyH: z must be finite");
  if (h == 0.0 || z == 0.0) return z;
  return z * std::exp(-0.5 * LambertW0OfHz2(z, h));
}

double LogInvTukeyHDerivative(double z, double h) {
  if (!(h >= 0.0)) throw DomainError("LogInvTukeyHDerivative: h must be >= 0");
  if (h == 0.0 || z == 0.0) return 0.0;
  const double w = LambertW0OfHz2(z, h);
  return -0.5 * w - std::log1p(w);
}

TruncatedMoments TruncatedNormalMoments(double tau_bar, double alpha_sq) {
  if (!(alpha_sq >= 0.0)) {
    throw DomainError("TruncatedNormalMoments: alpha_sq must be >= 0");
  }
  if (!std::isfinite(tau_bar)) {
    throw DomainError("TruncatedNormalMoments: tau_bar must be finite");
  }
  const double scale = 1.0 + alpha_sq;
  TruncatedMoments m;
  if (tau_bar < kMillsSwitch) {
    // With t = -tau_bar and D2 = t + 3/(t + 4/(t + ...)):
    //   tau_bar + phi/Phi = 1/(t + 2/D2),  1 + tau_bar^2 + tau_bar phi/Phi
    //   = 2/(t D2 + 2). Both forms avoid the cancellation of the direct ones.
    const double t = -tau_bar;
    const double d2 = ContinuedFraction(t, 3.0);
    m.v1 = 1.0 / (t + 2.0 / d2) / std::sqrt(scale);
    m.v2 = 2.0 / (t * d2 + 2.0) / scale;
    return m;
  }
  const double r = InverseMillsRatio(tau_bar);
  m.v1 = (tau_bar + r) / std::sqrt(scale);
  m.v2 = (1.0 + tau_bar * tau_bar + tau_bar * r) / scale;
  return m;
}

}  // namespace snth

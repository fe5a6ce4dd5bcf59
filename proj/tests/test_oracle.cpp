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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "snth/error.hpp"
#include "snth/oracle.hpp"
#include "snth/special.hpp"
#include "test_helpers.hpp"

using snth::Matrix;
using snth::Vector;
namespace oracle = snth::oracle;

namespace {

Vector NormalSample(int n, std::uint64_t seed, double mean = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = d(rng);
  return x;
}

}  // namespace

TEST_CASE("bisection reference for lambert_w0") {
  CHECK(oracle::W0Reference(0.0) == 0.0);
  CHECK(oracle::W0Reference(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -12.0 + 18.0 * i / 199.0);
    const double ref = oracle::W0Reference(x);
    CHECK(std::fabs(snth::LambertW0(x) - ref) <= 1e-10 * std::max(1.0, ref));
    CHECK(std::fabs(ref * std::exp(ref) - x) <= 1e-11 * x);
  }
  CHECK_THROWS_AS(oracle::W0Reference(-1.0), snth::DomainError);
}

TEST_CASE("kolmogorov survival function") {
  // Reference values from an independent implementation.
  const double lam[] = {0.3, 0.5, 0.8, 1.0, 1.36, 1.63, 2.0, 3.0};
  const double ref[] = {0.9999906941986655,   0.9639452436648751,
                        0.5441424115741981,   0.26999967167735456,
                        0.049485876755377876, 0.009846364888486529,
                        0.0006709252557796953, 3.045995948942526e-08};
  for (int i = 0; i < 8; ++i) {
    CHECK(oracle::KolmogorovSf(lam[i]) == doctest::Approx(ref[i]).epsilon(1e-10));
  }
  CHECK(oracle::KolmogorovSf(0.0) == 1.0);
}

TEST_CASE("ks test is calibrated under the null") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01;
  double sum = 0.0;
  int small = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Vector x(500);
    for (int i = 0; i < 500; ++i) x(i) = u01(rng);
    const double p = oracle::KsTest(x, [](double v) { return std::clamp(v, 0.0, 1.0); });
    sum += p;
    small += p < 0.05 ? 1 : 0;
  }
  CHECK(sum / 100.0 == doctest::Approx(0.5).epsilon(0.2));
  CHECK(small <= 12);
}

TEST_CASE("ks test detects a shifted distribution") {
  const Vector x = NormalSample(1000, 3);
  CHECK(oracle::KsTest(x, [](double v) { return snth::NormCdf(v - 1.0); }) < 1e-6);
  CHECK(oracle::KsTest(x, [](double v) { return snth::NormCdf(v); }) > 1e-3);
  CHECK(oracle::KsTest(x, NormalSample(1000, 4, 1.0)) < 1e-6);
  CHECK(oracle::KsTest(x, NormalSample(1000, 5)) > 1e-3);
  CHECK_THROWS_AS(oracle::KsTest(Vector::Zero(5), NormalSample(100, 1)),
                  snth::DomainError);
}

TEST_CASE("gauss-legendre rule is exact for polynomials") {
  Vector x, w;
  oracle::GaussLegendre(10, -1.0, 2.0, &x, &w);
  CHECK(w.sum() == doctest::Approx(3.0).epsilon(1e-14));
  for (int k = 0; k < 20; ++k) {
    const double exact = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    const double quad = (w.array() * x.array().pow(k)).sum();
    CHECK(quad == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("quadrature normalization of known densities") {
  const auto normal = [](const Vector& v) {
    return -0.5 * v.squaredNorm() - 0.5 * v.size() * std::log(2.0 * std::numbers::pi);
  };
  const auto skew = [](const Vector& v) {
    return std::log(2.0) + std::log(snth::NormPdf(v(0))) + snth::LogNormCdf(2.0 * v(0));
  };
  const Vector lo1 = Vector::Constant(1, -12.0);
  const Vector hi1 = Vector::Constant(1, 12.0);
  CHECK(std::fabs(oracle::QuadNormalization(normal, lo1, hi1, 200) - 1.0) < 1e-10);
  CHECK(std::fabs(oracle::QuadNormalization(skew, lo1, hi1, 200) - 1.0) < 1e-10);
  // Node doubling leaves the value unchanged once resolved.
  CHECK(std::fabs(oracle::QuadNormalization(skew, lo1, hi1, 100) -
                  oracle::QuadNormalization(skew, lo1, hi1, 200)) < 1e-12);
  const Vector lo2 = Vector::Constant(2, -10.0);
  const Vector hi2 = Vector::Constant(2, 10.0);
  CHECK(std::fabs(oracle::QuadNormalization(normal, lo2, hi2, 120) - 1.0) < 1e-10);
}

TEST_CASE("adaptive normalization handles heavy tails") {
  const double c3 = std::tgamma(2.0) / (std::sqrt(3.0 * std::numbers::pi) * std::tgamma(1.5));
  const auto t3 = [c3](double x) { return std::log(c3) - 2.0 * std::log1p(x * x / 3.0); };
  CHECK(std::fabs(oracle::AdaptiveNormalization(t3, 0.0, 1e-12) - 1.0) < 1e-9);
  const auto shifted = [](double x) {
    return -0.5 * (x - 40.0) * (x - 40.0) - 0.5 * std::log(2.0 * std::numbers::pi);
  };
  CHECK(std::fabs(oracle::AdaptiveNormalization(shifted, 40.0, 1e-12) - 1.0) < 1e-9);
}

TEST_CASE("monte carlo moments and standard errors") {
  const oracle::Sampler normal = [](int n, std::uint64_t seed) {
    return Matrix(NormalSample(n, seed));
  };
  const auto est = oracle::McMoments(normal, 200000, {{1}, {2}, {4}}, 9);
  REQUIRE(est.size() == 3);
  CHECK(snth::testing::WithinSe(est[0].value, 0.0, est[0].std_error));
  CHECK(snth::testing::WithinSe(est[1].value, 1.0, est[1].std_error));
  CHECK(snth::testing::WithinSe(est[2].value, 3.0, est[2].std_error));
  CHECK(est[0].std_error == doctest::Approx(1.0 / std::sqrt(200000.0)).epsilon(0.02));

  // Half-normal: E|Z| = sqrt(2/pi).
  const oracle::Sampler half = [](int n, std::uint64_t seed) {
    return Matrix(NormalSample(n, seed).cwiseAbs());
  };
  const auto h = oracle::McMoments(half, 100000, {{1}}, 1);
  CHECK(snth::testing::WithinSe(h[0].value, std::sqrt(2.0 / std::numbers::pi),
                                h[0].std_error));
  // Same seed gives the same estimate.
  CHECK(oracle::McMoments(half, 100000, {{1}}, 1)[0].value == h[0].value);
  CHECK_THROWS_AS(oracle::McMoments(half, 10, {{1}}, 1), snth::DomainError);
}

TEST_CASE("jackknife statistics") {
  const Vector x = NormalSample(100000, 21);
  const auto var = oracle::SampleVariance(x);
  CHECK(snth::testing::WithinSe(var.value, 1.0, var.std_error));
  CHECK(var.std_error == doctest::Approx(std::sqrt(2.0 / 100000.0)).epsilon(0.1));
  const auto skew = oracle::SampleSkewness(x);
  CHECK(snth::testing::WithinSe(skew.value, 0.0, skew.std_error));
  const auto kurt = oracle::SampleExcessKurtosis(x);
  CHECK(snth::testing::WithinSe(kurt.value, 0.0, kurt.std_error));
  const Vector y = 0.5 * x + NormalSample(100000, 22);
  const auto cov = oracle::SampleCovariance(x, y);
  CHECK(snth::testing::WithinSe(cov.value, 0.5, cov.std_error));
}

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
#include "snth/snth.hpp"
#include "test_helpers.hpp"

using snth::Matrix;
using snth::SnthParams;
using snth::Vector;
using snth::testing::RandomCorrelation;
using snth::testing::RandomVector;
using snth::testing::WithinSe;

namespace {

SnthParams Scalar(double xi, double omega, double eta, double h) {
  return {Vector::Constant(1, xi), Vector::Constant(1, omega),
          Matrix::Identity(1, 1), Vector::Constant(1, eta),
          Vector::Constant(1, h)};
}

// Bivariate panel with correlation 0.4, eta = (-1, 2), h = (0.05, 0.1).
SnthParams FigureParams() {
  SnthParams p;
  p.xi = Vector::Zero(2);
  p.omega = Vector::Ones(2);
  p.psi_bar = Matrix::Identity(2, 2);
  p.psi_bar(0, 1) = p.psi_bar(1, 0) = 0.4;
  p.eta = Vector(2);
  p.eta << -1.0, 2.0;
  p.h = Vector(2);
  p.h << 0.05, 0.1;
  return p;
}

SnthParams Trivariate() {
  SnthParams p;
  p.xi = Vector(3);
  p.xi << 0.8, -0.6, 1.3;
  p.omega = Vector(3);
  p.omega << 3.0, 5.0, 2.0;
  p.psi_bar = Matrix::Identity(3, 3);
  p.psi_bar(0, 1) = p.psi_bar(1, 0) = -0.5;
  p.psi_bar(0, 2) = p.psi_bar(2, 0) = 0.3;
  p.psi_bar(1, 2) = p.psi_bar(2, 1) = -0.2;
  p.eta = Vector(3);
  p.eta << -1.5, 2.0, 0.5;
  p.h = Vector(3);
  p.h << 0.02, 0.02, 0.03;
  return p;
}

// Integrates a bivariate SNTH density on a Gauss-Legendre grid laid in latent
// coordinates, where the integrand is light tailed.
double LatentGridNormalization(const SnthParams& p, int nodes, double half_width) {
  const snth::SnthLogDensity f(p);
  std::vector<snth::oracle::AxisMap> axes;
  for (int k = 0; k < p.dim(); ++k) {
    const double xi = p.xi(k), om = p.omega(k), h = p.h(k);
    axes.push_back({-half_width, half_width,
                    [=](double z) { return xi + om * snth::TukeyH(z, h); },
                    [=](double z) {
                      return std::log(om) + std::log1p(h * z * z) + 0.5 * h * z * z;
                    }});
  }
  return snth::oracle::QuadNormalization([&](const Vector& y) { return f(y); },
                                         axes, nodes);
}

}  // namespace

TEST_CASE("params validation") {
  SnthParams p = FigureParams();
  CHECK_NOTHROW(p.Validate());
  p.h(0) = -0.1;
  CHECK_THROWS_AS(p.Validate(), snth::DomainError);
  p = FigureParams();
  p.omega(1) = 0.0;
  CHECK_THROWS_AS(p.Validate(), snth::DomainError);
  p = FigureParams();
  p.psi_bar(0, 0) = 1.1;
  CHECK_THROWS_AS(p.Validate(), snth::DomainError);
  p = FigureParams();
  p.psi_bar(0, 1) = p.psi_bar(1, 0) = 1.0;
  CHECK_THROWS_AS(p.Validate(), snth::NumericalError);
}

TEST_CASE("log pdf reduces to the skew-normal at h = 0") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 4;
    SnthParams p{RandomVector(d, rng), RandomVector(d, rng).cwiseAbs().array() + 0.3,
                 RandomCorrelation(d, rng), RandomVector(d, rng, 1.5), Vector::Zero(d)};
    for (int k = 0; k < 5; ++k) {
      const Vector y = RandomVector(d, rng, 3.0);
      const Vector x = (y - p.xi).cwiseQuotient(p.omega);
      const double want =
          snth::EsnLogPdf(x, p.Latent()) - p.omega.array().log().sum();
      CHECK(std::fabs(snth::SnthLogPdf(y, p) - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
    }
  }
}

TEST_CASE("log pdf symmetry when eta = 0") {
  SnthParams p = FigureParams();
  p.eta.setZero();
  p.xi << 0.5, -1.0;
  p.omega << 2.0, 0.5;
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    const Vector v = RandomVector(2, rng, 2.0);
    const Vector a = p.xi + p.omega.cwiseProduct(v);
    const Vector b = p.xi - p.omega.cwiseProduct(v);
    CHECK(snth::SnthLogPdf(a, p) == doctest::Approx(snth::SnthLogPdf(b, p)).epsilon(1e-13));
  }
}

TEST_CASE("univariate density integrates to one") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uh(0.0, 0.3);
  for (int k = 0; k < 20; ++k) {
    const SnthParams p = Scalar(RandomVector(1, rng)(0), 0.5 + uh(rng) * 5,
                                RandomVector(1, rng, 2.0)(0), uh(rng));
    const snth::SnthLogDensity f(p);
    const double total = snth::oracle::AdaptiveNormalization(
        [&](double y) { return f(Vector::Constant(1, y)); }, p.xi(0), 1e-10);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("bivariate density integrates to one") {
  const SnthParams p = FigureParams();
  const double a = LatentGridNormalization(p, 200, 12.0);
  const double b = LatentGridNormalization(p, 400, 14.0);
  CHECK(a == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::fabs(a - b) < 1e-5);
}

TEST_CASE("sampling basics") {
  SnthParams g = Scalar(0.0, 1.0, 0.0, 0.0);
  const Matrix y = snth::SnthSample(10000, g, 3);
  CHECK(snth::oracle::KsTest(y.col(0), [](double x) { return snth::NormCdf(x); }) > 0.01);
  const SnthParams p = FigureParams();
  CHECK(snth::SnthSample(50, p, 9) == snth::SnthSample(50, p, 9));
  // Latent draws invert exactly.
  const snth::SnthDraws d = snth::SnthSampleDetailed(100, p, 4);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(snth::InvTukeyH(d.y(i, j), p.h(j)) == doctest::Approx(d.z(i, j)).epsilon(1e-12));
    }
  }
  // Overflowing draws are reported per row.
  const SnthParams wild = Scalar(0.0, 1.0, 0.0, 200.0);
  const snth::SnthDraws w = snth::SnthSampleDetailed(2000, wild, 5);
  CHECK(!w.overflow_rows.empty());
  for (int r : w.overflow_rows) CHECK(std::isinf(w.y(r, 0)));
  CHECK_THROWS_AS(snth::SnthSample(2000, wild, 5), snth::OverflowError);
}

TEST_CASE("sample mean matches the closed form") {
  const SnthParams p = Trivariate();
  const snth::MomentReport m = snth::SnthMoments(p);
  CHECK(m.AllDefined());
  const Matrix y = snth::SnthSample(1000000, p, 77);
  for (int j = 0; j < 3; ++j) {
    const auto e = snth::oracle::SampleMean(y.col(j));
    CHECK(WithinSe(e.value, m.mean(j), e.std_error));
    const auto v = snth::oracle::SampleVariance(y.col(j));
    CHECK(WithinSe(v.value, m.cov(j, j), v.std_error));
    for (int k = j + 1; k < 3; ++k) {
      const auto c = snth::oracle::SampleCovariance(y.col(j), y.col(k));
      CHECK(WithinSe(c.value, m.cov(j, k), c.std_error));
    }
  }
}

TEST_CASE("moments: closed-form cases and masks") {
  SnthParams p = FigureParams();
  p.eta.setZero();
  p.h.setZero();
  p.omega << 2.0, 3.0;
  p.xi << 1.0, -1.0;
  const auto g = snth::SnthMoments(p);
  CHECK(g.mean == p.xi);
  const Matrix want = p.omega.asDiagonal() * p.psi_bar * p.omega.asDiagonal();
  CHECK((g.cov - want).cwiseAbs().maxCoeff() < 1e-13);

  const auto s = snth::SnthMoments(Scalar(0.0, 1.0, 1.5, 0.02));
  CHECK(s.mean(0) == doctest::Approx(1.2930242556480283).epsilon(1e-14));

  p.h << 0.6, 0.0;
  const auto k = snth::SnthMoments(p);
  CHECK_FALSE(k.cov_defined(0, 0));
  CHECK(k.cov_defined(1, 1));
  CHECK(k.cov(1, 1) == doctest::Approx(9.0));
  CHECK(k.cov(0, 0) == 0.0);

  // Flipping h across each boundary flips the corresponding flag.
  const double eta = 0.7, s2 = 1.0 + eta * eta;
  for (double scale : {1.0, 2.0}) {
    const double edge = 1.0 / (scale * s2);
    const auto below = snth::SnthMoments(Scalar(0, 1, eta, edge * (1 - 1e-9)));
    const auto above = snth::SnthMoments(Scalar(0, 1, eta, edge * (1 + 1e-9)));
    if (scale == 1.0) {
      CHECK(below.mean_defined[0]);
      CHECK_FALSE(above.mean_defined[0]);
    } else {
      CHECK(below.cov_defined(0, 0));
      CHECK_FALSE(above.cov_defined(0, 0));
    }
  }
}

TEST_CASE("univariate mean by Monte Carlo") {
  const SnthParams p = Scalar(0.0, 1.0, 1.5, 0.02);
  const auto est = snth::oracle::McMoments(
      [&](int n, std::uint64_t seed) { return snth::SnthSample(n, p, seed); },
      2000000, {{1}}, 101);
  CHECK(WithinSe(est[0].value, 1.2930242556480283, est[0].std_error));
}

TEST_CASE("skewness and kurtosis") {
  auto sk = snth::SnthSkewKurt(0.0, 0.0);
  CHECK(*sk.gamma1 == doctest::Approx(0.0));
  CHECK(*sk.gamma2 == doctest::Approx(0.0).epsilon(1e-12));
  sk = snth::SnthSkewKurt(0.0, 0.05);
  CHECK(*sk.gamma1 == 0.0);
  CHECK(*sk.gamma2 > 0.0);
  // h = 0 gives the skew-normal values.
  const double eta = 1.3, d = eta / std::sqrt(1 + eta * eta);
  const double b = std::sqrt(2.0 / std::numbers::pi);
  const double g1 = (4 - std::numbers::pi) / 2 * std::pow(b * d, 3) /
                    std::pow(1 - b * b * d * d, 1.5);
  const double g2 = 2 * (std::numbers::pi - 3) * std::pow(b * d, 4) /
                    std::pow(1 - b * b * d * d, 2);
  sk = snth::SnthSkewKurt(eta, 0.0);
  CHECK(*sk.gamma1 == doctest::Approx(g1).epsilon(1e-12));
  CHECK(*sk.gamma2 == doctest::Approx(g2).epsilon(1e-12));
  // Existence boundaries.
  sk = snth::SnthSkewKurt(1.0, 0.2);
  CHECK_FALSE(sk.gamma1.has_value());
  sk = snth::SnthSkewKurt(1.0, 0.15);
  CHECK(sk.gamma1.has_value());
  CHECK_FALSE(sk.gamma2.has_value());
  // Kurtosis increases with h.
  for (double e : {0.0, 0.5, 1.5}) {
    const double hmax = 1.0 / (4.0 * (1 + e * e));
    double prev = -1e300;
    for (double h = 0.0; h < hmax * 0.999; h += hmax / 200) {
      const double g = *snth::SnthSkewKurt(e, h).gamma2;
      CHECK(g >= prev);
      prev = g;
    }
  }
}

TEST_CASE("skewness and kurtosis by Monte Carlo") {
  const SnthParams p = Scalar(0.0, 1.0, 1.0, 0.05);
  const Matrix y = snth::SnthSample(10000000, p, 55);
  const auto sk = snth::SnthSkewKurt(p);
  const auto s = snth::oracle::SampleSkewness(y.col(0));
  const auto k = snth::oracle::SampleExcessKurtosis(y.col(0));
  CHECK(WithinSe(s.value, *sk.gamma1, s.std_error));
  CHECK(WithinSe(k.value, *sk.gamma2, k.std_error));
}

TEST_CASE("cdf") {
  const SnthParams p = FigureParams();
  CHECK(snth::SnthCdf(Vector::Constant(2, INFINITY), p) == 1.0);
  CHECK(snth::SnthCdf(Vector::Constant(1, 0.7), Scalar(0.7, 2.0, 0.0, 0.3)) ==
        doctest::Approx(0.5));
  // Numerical derivative matches the density.
  const SnthParams q = Scalar(0.4, 1.7, 1.2, 0.15);
  for (double y = -4.0; y <= 8.0; y += 0.5) {
    const double e = 1e-4;
    const double num = (snth::SnthCdf(Vector::Constant(1, y + e), q) -
                        snth::SnthCdf(Vector::Constant(1, y - e), q)) / (2 * e);
    CHECK(std::fabs(num - std::exp(snth::SnthLogPdf(Vector::Constant(1, y), q))) < 1e-4);
  }
  // Empirical cdf of the bivariate panel.
  const Matrix y = snth::SnthSample(100000, p, 8);
  const double emp = ((y.col(0).array() <= 0.0) && (y.col(1).array() <= 0.0)).cast<double>().mean();
  CHECK(std::fabs(snth::SnthCdf(Vector::Zero(2), p) - emp) < 0.01);
}

TEST_CASE("marginals") {
  const SnthParams p = Trivariate();
  const SnthParams all = snth::SnthMarginal(p, {0, 1, 2});
  CHECK(all.psi_bar == p.psi_bar);
  CHECK(all.h == p.h);
  const SnthParams m = snth::SnthMarginal(p, {2, 0});
  CHECK(m.psi_bar(0, 1) == p.psi_bar(2, 0));
  CHECK(m.xi(0) == p.xi(2));
  CHECK_THROWS_AS(snth::SnthMarginal(p, {}), snth::DomainError);

  const Matrix full = snth::SnthSample(10000, p, 12);
  const Matrix marg = snth::SnthSample(10000, snth::SnthMarginal(p, {1}), 13);
  CHECK(snth::oracle::KsTest(Vector(full.col(1)), Vector(marg.col(0))) > 0.01);

  // Integrating the joint density over one coordinate gives the marginal.
  const SnthParams f = FigureParams();
  const snth::SnthLogDensity joint(f);
  const SnthParams f0 = snth::SnthMarginal(f, {0});
  Vector z, w;
  snth::oracle::GaussLegendre(300, -12.0, 12.0, &z, &w);
  for (double y0 = -4.0; y0 <= 3.0; y0 += 0.7) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      Vector y(2);
      y << y0, snth::TukeyH(z(i), f.h(1));
      s += w(i) * std::exp(joint(y) + std::log1p(f.h(1) * z(i) * z(i)) +
                           0.5 * f.h(1) * z(i) * z(i));
    }
    CHECK(std::fabs(s - std::exp(snth::SnthLogPdf(Vector::Constant(1, y0), f0))) < 1e-4);
  }
}

TEST_CASE("conditional law") {
  SnthParams p = Trivariate();
  p.psi_bar(0, 2) = p.psi_bar(2, 0) = 0.0;
  p.psi_bar(1, 2) = p.psi_bar(2, 1) = 0.0;
  p.eta(2) = 0.0;
  const snth::Split s{{0, 1}, {2}};
  const auto c = snth::SnthCondition(p, s, Vector::Constant(1, 2.5));
  const snth::EsnParams m = snth::SnthMarginal(p, {0, 1}).Latent();
  CHECK((c.base.psi - m.psi).norm() < 1e-15);
  CHECK((c.base.eta - m.eta).norm() < 1e-15);
  CHECK(c.base.xi.norm() < 1e-15);
  CHECK(c.base.tau == 0.0);

  // h = 0 agrees with the skew-normal conditional of the latent vector.
  SnthParams q = Trivariate();
  q.h.setZero();
  const Vector y2 = Vector::Constant(1, 0.4);
  const auto cq = snth::SnthCondition(q, s, y2);
  const auto sq = snth::SnConditional(q.Latent(), s, (y2 - q.xi.tail(1)).cwiseQuotient(q.omega.tail(1)));
  CHECK((cq.base.xi - sq.xi).norm() < 1e-14);
  CHECK((cq.base.psi - sq.psi).norm() < 1e-14);
  CHECK(cq.base.tau == doctest::Approx(sq.tau).epsilon(1e-14));
}

TEST_CASE("conditional density ratio") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    SnthParams p{RandomVector(d, rng), RandomVector(d, rng).cwiseAbs().array() + 0.3,
                 RandomCorrelation(d, rng), RandomVector(d, rng, 1.5),
                 RandomVector(d, rng, 0.2).cwiseAbs()};
    snth::Split s;
    for (int i = 0; i < d; ++i) (i == d - 1 ? s.block2 : s.block1).push_back(i);
    for (int k = 0; k < 5; ++k) {
      const Vector y = p.xi + p.omega.cwiseProduct(RandomVector(d, rng, 2.0));
      const Vector y1 = snth::Select(y, s.block1);
      const Vector y2 = snth::Select(y, s.block2);
      const double ratio = snth::SnthLogPdf(y, p) -
                           snth::SnthLogPdf(y2, snth::SnthMarginal(p, s.block2));
      const double cond = snth::SnthConditionalLogPdf(y1, snth::SnthCondition(p, s, y2));
      CHECK(std::fabs(ratio - cond) < 1e-10);
    }
  }
}

namespace {

void CheckConditionalMomentsByMc(const snth::SnthConditional& c, std::uint64_t seed) {
  const snth::MomentReport m = snth::SnthConditionalMoments(c);
  REQUIRE(m.AllDefined());
  const Matrix y = snth::SnthConditionalSample(1000000, c, seed);
  for (int i = 0; i < c.dim(); ++i) {
    const auto e = snth::oracle::SampleMean(y.col(i));
    CHECK(WithinSe(e.value, m.mean(i), e.std_error));
    const auto v = snth::oracle::SampleVariance(y.col(i));
    CHECK(WithinSe(v.value, m.cov(i, i), v.std_error));
    for (int j = i + 1; j < c.dim(); ++j) {
      const auto cv = snth::oracle::SampleCovariance(y.col(i), y.col(j));
      CHECK(WithinSe(cv.value, m.cov(i, j), cv.std_error));
    }
  }
}

}  // namespace

TEST_CASE("conditional moments, h = 0 (ESN moments)") {
  SnthParams p = Trivariate();
  p.h.setZero();
  const auto c = snth::SnthCondition(p, {{0, 1}, {2}}, Vector::Constant(1, 3.0));
  CheckConditionalMomentsByMc(c, 61);
}

TEST_CASE("conditional moments against Monte Carlo") {
  const SnthParams p = Trivariate();
  CheckConditionalMomentsByMc(snth::SnthCondition(p, {{0, 1}, {2}}, Vector::Constant(1, 3.0)), 67);
  CheckConditionalMomentsByMc(snth::SnthCondition(p, {{0, 2}, {1}}, Vector::Constant(1, -4.0)), 71);
  CheckConditionalMomentsByMc(snth::SnthCondition(p, {{1}, {0, 2}}, Vector::Ones(2)), 73);
}

TEST_CASE("conditional moments in the symmetric case") {
  SnthParams p = Trivariate();
  p.eta.setZero();
  p.xi.setZero();
  const auto c = snth::SnthCondition(p, {{0, 1}, {2}}, Vector::Constant(1, 0.0));
  const auto m = snth::SnthConditionalMoments(c);
  CHECK(std::fabs(m.mean(0)) < 1e-14);
  CHECK(std::fabs(m.mean(1)) < 1e-14);
  CHECK((m.cov(0, 1) < 0) == (c.base.psi(0, 1) < 0));
  // Boundary flags follow hi < 1 / (k (psi_ii + eta_i^2)).
  snth::SnthConditional big = c;
  big.h1(0) = 0.51 / c.base.psi(0, 0);
  const auto mb = snth::SnthConditionalMoments(big);
  CHECK(mb.mean_defined[0]);
  CHECK_FALSE(mb.cov_defined(0, 0));
  CHECK(mb.cov_defined(1, 1));
}

TEST_CASE("canonical form") {
  SnthParams p = Trivariate();
  p.eta.setZero();
  auto f = snth::SnthCanonical(p);
  CHECK(f.canon.eta.norm() == 0.0);
  CHECK(f.canon.psi_bar == Matrix::Identity(3, 3));

  const SnthParams one = Scalar(1.0, 2.0, -0.8, 0.1);
  f = snth::SnthCanonical(one);
  CHECK(std::fabs(f.h_star(0, 0)) == doctest::Approx(1.0));
  CHECK(f.canon.eta(0) == doctest::Approx(0.8));

  const SnthParams q = Trivariate();
  f = snth::SnthCanonical(q);
  const Matrix y = snth::SnthSample(1000000, q, 83);
  Matrix z(y.rows(), 3);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const Vector c = snth::ToCanonical(y.row(i).transpose(), q, f);
    for (int j = 0; j < 3; ++j) z(i, j) = snth::InvTukeyH(c(j), q.h(j));
  }
  for (int j = 1; j < 3; ++j) {
    const auto s = snth::oracle::SampleSkewness(z.col(j));
    CHECK(std::fabs(s.value) <= 4.0 * s.std_error);
  }
  const auto s0 = snth::oracle::SampleSkewness(z.col(0));
  CHECK(s0.value > 10 * s0.std_error);
}

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

#include "snth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "snth/error.hpp"

namespace snth::oracle {
namespace {

// SplitMix64 step, used to derive independent chunk seeds.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Monomial(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                const std::vector<int>& powers) {
  double v = 1.0;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    for (int k = 0; k < powers[j]; ++k) v *= row(j);
  }
  return v;
}

}  // namespace

std::vector<McEstimate> McMoments(const Sampler& sampler, int n,
                                  const std::vector<std::vector<int>>& orders,
                                  std::uint64_t seed) {
  if (n < 1000) throw DomainError("McMoments: n must be >= 1000");
  constexpr int kChunk = 100000;
  const int chunks = (n + kChunk - 1) / kChunk;
  const std::size_t k = orders.size();
  struct Sums {
    Vector s1, s2;
  };
  std::vector<std::future<Sums>> jobs;
  for (int c = 0; c < chunks; ++c) {
    const int m = std::min(kChunk, n - c * kChunk);
    jobs.push_back(std::async(std::launch::async, [&, c, m] {
      const Matrix draws = sampler(m, DeriveSeed(seed, c));
      Sums s{Vector::Zero(k), Vector::Zero(k)};
      for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        for (std::size_t o = 0; o < k; ++o) {
          const double v = Monomial(draws.row(i), orders[o]);
          s.s1(o) += v;
          s.s2(o) += v * v;
        }
      }
      return s;
    }));
  }
  Vector s1 = Vector::Zero(k);
  Vector s2 = Vector::Zero(k);
  for (auto& j : jobs) {
    const Sums s = j.get();
    s1 += s.s1;
    s2 += s.s2;
  }
  std::vector<McEstimate> out(k);
  for (std::size_t o = 0; o < k; ++o) {
    const double mean = s1(o) / n;
    const double var = std::max(0.0, (s2(o) - n * mean * mean) / (n - 1));
    out[o] = {mean, std::sqrt(var / n), n};
  }
  return out;
}

McEstimate Jackknife(const Matrix& features,
                     const std::function<double(const Vector&)>& stat,
                     int groups) {
  const Eigen::Index n = features.rows();
  if (n < 2 || groups < 2 || groups > n) {
    throw DomainError("Jackknife: need 2 <= groups <= rows");
  }
  const Eigen::Index k = features.cols();
  Matrix group_sums = Matrix::Zero(groups, k);
  Vector group_sizes = Vector::Zero(groups);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index g = i * groups / n;
    group_sums.row(g) += features.row(i);
    group_sizes(g) += 1.0;
  }
  const Vector total = group_sums.colwise().sum().transpose();
  const double full = stat(total / static_cast<double>(n));
  Vector loo(groups);
  for (int g = 0; g < groups; ++g) {
    loo(g) = stat((total - group_sums.row(g).transpose()) /
                  (static_cast<double>(n) - group_sizes(g)));
  }
  const double mean = loo.mean();
  const double var = (groups - 1.0) / groups * (loo.array() - mean).square().sum();
  return {full, std::sqrt(var), static_cast<std::int64_t>(n)};
}

McEstimate SampleMean(const Vector& x) {
  const Eigen::Index n = x.size();
  if (n < 2) throw DomainError("SampleMean: need at least 2 values");
  const double m = x.mean();
  const double var = (x.array() - m).square().sum() / (n - 1);
  return {m, std::sqrt(var / n), static_cast<std::int64_t>(n)};
}

McEstimate SampleVariance(const Vector& x) {
  Matrix f(x.size(), 2);
  f.col(0) = x;
  f.col(1) = x.array().square();
  return Jackknife(f, [](const Vector& m) { return m(1) - m(0) * m(0); });
}

McEstimate SampleCovariance(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw DomainError("SampleCovariance: size mismatch");
  Matrix f(x.size(), 3);
  f.col(0) = x;
  f.col(1) = y;
  f.col(2) = x.cwiseProduct(y);
  return Jackknife(f, [](const Vector& m) { return m(2) - m(0) * m(1); });
}

namespace {

// Central moments 2..4 from raw moments 1..4.
Eigen::Vector3d Central(const Vector& m) {
  const double m1 = m(0);
  const double c2 = m(1) - m1 * m1;
  const double c3 = m(2) - 3.0 * m(1) * m1 + 2.0 * m1 * m1 * m1;
  const double c4 =
      m(3) - 4.0 * m(2) * m1 + 6.0 * m(1) * m1 * m1 - 3.0 * std::pow(m1, 4);
  return {c2, c3, c4};
}

Matrix Powers(const Vector& x) {
  // Centering first keeps the power sums well conditioned.
  const Vector c = x.array() - x.mean();
  Matrix f(x.size(), 4);
  f.col(0) = c;
  f.col(1) = c.array().square();
  f.col(2) = c.array().cube();
  f.col(3) = c.array().square().square();
  return f;
}

}  // namespace

McEstimate SampleSkewness(const Vector& x) {
  return Jackknife(Powers(x), [](const Vector& m) {
    const auto c = Central(m);
    return c(1) / std::pow(c(0), 1.5);
  });
}

McEstimate SampleExcessKurtosis(const Vector& x) {
  return Jackknife(Powers(x), [](const Vector& m) {
    const auto c = Central(m);
    return c(2) / (c(0) * c(0)) - 3.0;
  });
}

void GaussLegendre(int nodes, double a, double b, Vector* x, Vector* w) {
  if (nodes < 1) throw DomainError("GaussLegendre: nodes must be >= 1");
  // Golub-Welsch: eigen decomposition of the Jacobi matrix.
  Vector diag = Vector::Zero(nodes);
  Vector sub(std::max(nodes - 1, 0));
  for (int k = 1; k < nodes; ++k) {
    sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, sub);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  *x = (mid + half * es.eigenvalues().array()).matrix();
  *w = (2.0 * half * es.eigenvectors().row(0).array().square()).matrix();
}

double QuadNormalization(const LogDensity& log_pdf, const Vector& lower,
                         const Vector& upper, int nodes) {
  std::vector<AxisMap> axes;
  for (Eigen::Index k = 0; k < lower.size(); ++k) {
    axes.push_back({lower(k), upper(k), [](double u) { return u; },
                    [](double) { return 0.0; }});
  }
  return QuadNormalization(log_pdf, axes, nodes);
}

double QuadNormalization(const LogDensity& log_pdf,
                         const std::vector<AxisMap>& axes, int nodes) {
  const std::size_t dim = axes.size();
  if (dim != 1 && dim != 2) {
    throw DomainError("QuadNormalization: dimension must be 1 or 2");
  }
  std::vector<Vector> xs(dim);
  std::vector<Vector> ws(dim);
  std::vector<Vector> lj(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Vector u;
    Vector w;
    GaussLegendre(nodes, axes[k].lower, axes[k].upper, &u, &w);
    xs[k].resize(nodes);
    lj[k].resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      xs[k](i) = axes[k].map(u(i));
      lj[k](i) = axes[k].log_jacobian(u(i));
    }
    ws[k] = w;
  }
  double sum = 0.0;
  Vector pt(dim);
  if (dim == 1) {
    for (int i = 0; i < nodes; ++i) {
      pt(0) = xs[0](i);
      sum += ws[0](i) * std::exp(log_pdf(pt) + lj[0](i));
    }
    return sum;
  }
  for (int i = 0; i < nodes; ++i) {
    pt(0) = xs[0](i);
    double inner = 0.0;
    for (int j = 0; j < nodes; ++j) {
      pt(1) = xs[1](j);
      inner += ws[1](j) * std::exp(log_pdf(pt) + lj[1](j));
    }
    sum += ws[0](i) * std::exp(lj[0](i)) * inner;
  }
  return sum;
}

double AdaptiveNormalization(const std::function<double(double)>& log_pdf,
                             double center, double tol) {
  // Each half line goes to exp-sinh quadrature, which copes with the
  // algebraic tails of heavy-tailed densities.
  boost::math::quadrature::exp_sinh<double> rule;
  auto right = [&](double t) { return std::exp(log_pdf(center + t)); };
  auto left = [&](double t) { return std::exp(log_pdf(center - t)); };
  const double inf = std::numeric_limits<double>::infinity();
  return rule.integrate(right, 0.0, inf, tol) + rule.integrate(left, 0.0, inf, tol);
}

double W0Reference(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("W0Reference: x must be finite and >= 0");
  }
  double lo = 0.0;
  double hi = std::max(1.0, std::log1p(x) + 2.0);
  // Relative tolerance so tiny roots are resolved as well as large ones.
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double KolmogorovSf(double lambda) {
  // The alternating series is slow below 0.2, where the value is 1 anyway.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double KsTest(const Vector& sample, const std::function<double(double)>& cdf) {
  const Eigen::Index n = sample.size();
  if (n < 20) throw DomainError("KsTest: need at least 20 points");
  std::vector<double> x(sample.data(), sample.data() + n);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(static_cast<double>(n));
  return KolmogorovSf((rn + 0.12 + 0.11 / rn) * d);
}

double KsTest(const Vector& a, const Vector& b) {
  if (a.size() < 20 || b.size() < 20) {
    throw DomainError("KsTest: need at least 20 points per sample");
  }
  std::vector<double> x(a.data(), a.data() + a.size());
  std::vector<double> y(b.data(), b.data() + b.size());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = x.size();
  const double m = y.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::fabs(i / n - j / m));
  }
  const double en = std::sqrt(n * m / (n + m));
  return KolmogorovSf((en + 0.12 + 0.11 / en) * d);
}

}  // namespace snth::oracle

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

#include "snth/skewnormal.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "snth/error.hpp"

namespace snth {
namespace {

constexpr double kLogTwoPi = 1.83787706640934548356;

void CheckSymmetric(const Matrix& a, const std::string& what) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError(what + ": matrix is not symmetric");
  }
}

}  // namespace

void AsnParams::Validate() const {
  const int p = dim();
  if (p < 1) throw DomainError("AsnParams: dimension must be >= 1");
  if (omega_mat.rows() != p || omega_mat.cols() != p || alpha.size() != p) {
    throw DomainError("AsnParams: dimension mismatch");
  }
  if (!xi.allFinite() || !alpha.allFinite()) {
    throw DomainError("AsnParams: non-finite entries");
  }
  CheckSymmetric(omega_mat, "AsnParams");
  CheckedCholesky(omega_mat, "AsnParams");
}

void EsnParams::Validate() const {
  const int p = dim();
  if (p < 1) throw DomainError("EsnParams: dimension must be >= 1");
  if (psi.rows() != p || psi.cols() != p || eta.size() != p) {
    throw DomainError("EsnParams: dimension mismatch");
  }
  if (!xi.allFinite() || !eta.allFinite() || !std::isfinite(tau)) {
    throw DomainError("EsnParams: non-finite entries");
  }
  CheckSymmetric(psi, "EsnParams");
  CheckedCholesky(psi, "EsnParams");
}

void Split::Validate(int dim) const {
  CheckIndex(block1, dim, "Split");
  CheckIndex(block2, dim, "Split");
  if (static_cast<int>(block1.size() + block2.size()) != dim) {
    throw DomainError("Split: blocks must partition the coordinates");
  }
  Index all = block1;
  all.insert(all.end(), block2.begin(), block2.end());
  CheckIndex(all, dim, "Split");
}

EsnParams AsnToSn(const AsnParams& p) {
  p.Validate();
  const Vector w = p.omega_mat.diagonal().cwiseSqrt();
  const Matrix omega_bar =
      w.cwiseInverse().asDiagonal() * p.omega_mat * w.cwiseInverse().asDiagonal();
  const Vector oa = omega_bar * p.alpha;
  const Vector delta = oa / std::sqrt(1.0 + p.alpha.dot(oa));
  EsnParams out;
  out.xi = p.xi;
  out.psi = w.asDiagonal() * (omega_bar - delta * delta.transpose()) *
            w.asDiagonal();
  out.psi = 0.5 * (out.psi + out.psi.transpose());
  out.eta = w.cwiseProduct(delta);
  out.tau = 0.0;
  CheckedCholesky(out.psi, "AsnToSn");
  return out;
}

AsnParams SnToAsn(const EsnParams& p) {
  p.Validate();
  if (p.tau != 0.0) throw DomainError("SnToAsn: tau must be 0");
  const auto llt = CheckedCholesky(p.psi, "SnToAsn");
  const Vector pe = llt.solve(p.eta);
  AsnParams out;
  out.xi = p.xi;
  out.omega_mat = p.psi + p.eta * p.eta.transpose();
  const Vector w = out.omega_mat.diagonal().cwiseSqrt();
  out.alpha = w.cwiseProduct(pe) / std::sqrt(1.0 + p.eta.dot(pe));
  return out;
}

EsnLogDensity::EsnLogDensity(const EsnParams& p) : p_(p) {
  p.Validate();
  psi_llt_ = CheckedCholesky(p.psi, "EsnLogPdf");
  psi_inv_eta_ = psi_llt_.solve(p.eta);
  one_plus_q_ = 1.0 + p.eta.dot(psi_inv_eta_);
  // det(Psi + eta eta') = det(Psi) (1 + q).
  log_norm_ = -0.5 * (p.dim() * kLogTwoPi + LogDet(psi_llt_) +
                      std::log(one_plus_q_)) -
              LogNormCdf(p.tau);
}

double EsnLogDensity::operator()(const Vector& y) const {
  if (y.size() != p_.dim()) throw DomainError("EsnLogPdf: dimension mismatch");
  const Vector d = y - p_.xi;
  const Vector r = d - p_.tau * p_.eta;
  const Vector l_inv_r = psi_llt_.matrixL().solve(r);
  const double er = psi_inv_eta_.dot(r);
  // r' (Psi + eta eta')^{-1} r by Sherman-Morrison.
  const double quad = l_inv_r.squaredNorm() - er * er / one_plus_q_;
  const double arg = (p_.tau + psi_inv_eta_.dot(d)) / std::sqrt(one_plus_q_);
  return log_norm_ - 0.5 * quad + LogNormCdf(arg);
}

double EsnLogPdf(const Vector& y, const EsnParams& p) {
  return EsnLogDensity(p)(y);
}

double SampleTruncatedNormal(double a, std::mt19937_64& rng) {
  std::normal_distribution<double> norm;
  if (a <= 0.0) {
    for (;;) {
      const double z = norm(rng);
      if (z > a) return z;
    }
  }
  // Robert (1995): exponential proposal with optimal rate.
  std::uniform_real_distribution<double> unif;
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a - std::log1p(-unif(rng)) / lambda;
    const double u = unif(rng);
    if (u <= std::exp(-0.5 * (x - lambda) * (x - lambda))) return x;
  }
}

Matrix EsnSample(int n, const EsnParams& p, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("EsnSample: n must be >= 1");
  p.Validate();
  const Matrix l = CheckedCholesky(p.psi, "EsnSample").matrixL();
  const int dim = p.dim();
  std::normal_distribution<double> norm;
  Matrix out(n, dim);
  Vector z(dim);
  const Vector shift = p.xi + p.tau * p.eta;
  for (int i = 0; i < n; ++i) {
    const double u = SampleTruncatedNormal(-p.tau, rng);
    for (int j = 0; j < dim; ++j) z(j) = norm(rng);
    out.row(i) = (shift + u * p.eta + l * z).transpose();
  }
  return out;
}

Matrix EsnSample(int n, const EsnParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return EsnSample(n, p, rng);
}

EsnParams SnMarginal(const EsnParams& p, const Index& idx) {
  p.Validate();
  if (p.tau != 0.0) throw DomainError("SnMarginal: tau must be 0");
  CheckIndex(idx, p.dim(), "SnMarginal");
  EsnParams out;
  out.xi = Select(p.xi, idx);
  out.psi = Select(p.psi, idx, idx);
  out.eta = Select(p.eta, idx);
  out.tau = 0.0;
  return out;
}

EsnParams SnConditional(const EsnParams& p, const Split& split,
                        const Vector& y2) {
  p.Validate();
  if (p.tau != 0.0) throw DomainError("SnConditional: tau must be 0");
  split.Validate(p.dim());
  const Index& b1 = split.block1;
  const Index& b2 = split.block2;
  if (y2.size() != static_cast<Eigen::Index>(b2.size())) {
    throw DomainError("SnConditional: y2 has the wrong dimension");
  }
  const Matrix p11 = Select(p.psi, b1, b1);
  const Matrix p12 = Select(p.psi, b1, b2);
  const Matrix p22 = Select(p.psi, b2, b2);
  const auto llt22 = CheckedCholesky(p22, "SnConditional");
  const Vector eta1 = Select(p.eta, b1);
  const Vector eta2 = Select(p.eta, b2);
  const Vector d2 = y2 - Select(p.xi, b2);
  const Vector inv_d2 = llt22.solve(d2);
  const Vector inv_eta2 = llt22.solve(eta2);
  const double scale = std::sqrt(1.0 + eta2.dot(inv_eta2));

  EsnParams out;
  out.xi = Select(p.xi, b1) + p12 * inv_d2;
  out.psi = p11 - p12 * llt22.solve(p12.transpose());
  out.psi = 0.5 * (out.psi + out.psi.transpose());
  out.eta = (eta1 - p12 * inv_eta2) / scale;
  out.tau = eta2.dot(inv_d2) / scale;
  return out;
}

double SnCdf(const Vector& y, const EsnParams& p, const Accuracy& acc) {
  p.Validate();
  if (p.tau != 0.0) throw DomainError("SnCdf: tau must be 0");
  const int dim = p.dim();
  if (y.size() != dim) throw DomainError("SnCdf: dimension mismatch");
  Matrix cov(dim + 1, dim + 1);
  cov.topLeftCorner(dim, dim) = p.psi + p.eta * p.eta.transpose();
  cov.topRightCorner(dim, 1) = -p.eta;
  cov.bottomLeftCorner(1, dim) = -p.eta.transpose();
  cov(dim, dim) = 1.0;
  Vector point(dim + 1);
  point.head(dim) = y - p.xi;
  point(dim) = 0.0;
  return std::min(1.0, 2.0 * MvnCdf(point, Vector::Zero(dim + 1), cov, acc));
}

SnCanonicalForm SnCanonical(const EsnParams& p) {
  p.Validate();
  if (p.tau != 0.0) throw DomainError("SnCanonical: tau must be 0");
  const int dim = p.dim();
  const Matrix omega = p.psi + p.eta * p.eta.transpose();
  CheckedCholesky(omega, "SnCanonical");
  const Matrix root_inv = InvSqrtSym(omega);
  const double q = p.eta.dot(CheckedCholesky(p.psi, "SnCanonical").solve(p.eta));

  Matrix rot = Matrix::Identity(dim, dim);
  if (q > 0.0) {
    const Matrix sigma =
        p.psi + (1.0 - 2.0 / std::numbers::pi) * p.eta * p.eta.transpose();
    Matrix m = root_inv * sigma * root_inv;
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) {
      throw NumericalError("SnCanonical: eigen decomposition failed");
    }
    // Eigenvalues come back ascending; the skew direction owns the smallest
    // one and the rest equal one.
    const Vector dir = root_inv * p.eta;
    for (int k = 0; k < dim; ++k) {
      Vector v = es.eigenvectors().col(k);
      if (k == 0) {
        if (v.dot(dir) < 0.0) v = -v;
      } else {
        for (int j = 0; j < dim; ++j) {
          if (std::fabs(v(j)) > 1e-12) {
            if (v(j) < 0.0) v = -v;
            break;
          }
        }
      }
      rot.row(k) = v.transpose();
    }
  }

  SnCanonicalForm out;
  Vector scale = Vector::Ones(dim);
  scale(0) = std::sqrt(1.0 + q);
  out.h_star = scale.asDiagonal() * rot * root_inv;
  out.canon.xi = Vector::Zero(dim);
  out.canon.psi = Matrix::Identity(dim, dim);
  out.canon.eta = Vector::Zero(dim);
  out.canon.eta(0) = std::sqrt(q);
  out.canon.tau = 0.0;
  return out;
}

}  // namespace snth

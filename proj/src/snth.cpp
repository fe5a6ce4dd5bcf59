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

#include "snth/snth.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "snth/error.hpp"

namespace snth {
namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

const SnthParams& Validated(const SnthParams& p) {
  p.Validate();
  return p;
}

// Standardized coordinates (y - xi) / omega.
Vector Standardize(const Vector& y, const Vector& xi, const Vector& omega) {
  return (y - xi).cwiseQuotient(omega);
}

// Sum of the log Jacobian of y -> tau_h^{-1}((y - xi) / omega).
double LogJacobian(const Vector& x, const Vector& omega, const Vector& h) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s += LogInvTukeyHDerivative(x(i), h(i)) - std::log(omega(i));
  }
  return s;
}

Vector InvTukeyHVec(const Vector& x, const Vector& h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = InvTukeyH(x(i), h(i));
  return g;
}

EsnParams EsnBlock(const EsnParams& p, const Index& idx) {
  EsnParams out;
  out.xi = Select(p.xi, idx);
  out.psi = Select(p.psi, idx, idx);
  out.eta = Select(p.eta, idx);
  out.tau = p.tau;
  return out;
}

// E[Y Y' exp(Y' H Y / 2)] for Y ~ ESN(b) of dimension 1 or 2, together with
// E[Y exp(Y' H Y / 2)]. Writing the tilted Gaussian part as k N(mu, om) and
// the skewing factor as Phi(a0 + a1' y), both reduce to moments of
// Phi(a0 + a1' y) under N(mu, om).
struct Tilted {
  bool finite = false;
  Vector first;
  Matrix second;
};

Tilted TiltedMoments(const EsnParams& b, const Matrix& h) {
  Tilted out;
  const int d = b.dim();
  const Matrix s = b.psi + b.eta * b.eta.transpose();
  const Eigen::LLT<Matrix> s_llt(s);
  const Matrix s_inv = s_llt.solve(Matrix::Identity(d, d));
  const Matrix prec = s_inv - h;
  const Eigen::LLT<Matrix> prec_llt(prec);
  if (prec_llt.info() != Eigen::Success) return out;

  const Eigen::LLT<Matrix> psi_llt(b.psi);
  const Vector psi_inv_eta = psi_llt.solve(b.eta);
  const double root = std::sqrt(1.0 + b.eta.dot(psi_inv_eta));
  const Vector a1 = psi_inv_eta / root;
  const double a0 = (b.tau - psi_inv_eta.dot(b.xi)) / root;

  const Vector m = b.xi + b.tau * b.eta;
  const Matrix om = prec_llt.solve(Matrix::Identity(d, d));
  const Vector mu = om * (s_inv * m);
  const double log_k = 0.5 * (-LogDet(prec_llt) - LogDet(s_llt)) +
                       0.5 * (mu.dot(prec * mu) - m.dot(s_inv * m));
  const double v = a1.dot(om * a1);
  const double t = (a0 + a1.dot(mu)) / std::sqrt(1.0 + v);
  const Vector dvec = om * a1 / std::sqrt(1.0 + v);
  const double zeta = InverseMillsRatio(t);
  const double mass = std::exp(log_k + LogNormCdf(t) - LogNormCdf(b.tau));

  out.finite = true;
  out.first = mass * (mu + dvec * zeta);
  out.second = mass * (om + mu * mu.transpose() +
                       zeta * (mu * dvec.transpose() + dvec * mu.transpose()) -
                       t * zeta * dvec * dvec.transpose());
  return out;
}

}  // namespace

void SnthParams::Validate() const {
  const int p = dim();
  if (p < 1) throw DomainError("SnthParams: dimension must be >= 1");
  if (omega.size() != p || eta.size() != p || h.size() != p ||
      psi_bar.rows() != p || psi_bar.cols() != p) {
    throw DomainError("SnthParams: dimension mismatch");
  }
  if (!xi.allFinite() || !eta.allFinite() || !omega.allFinite() ||
      !h.allFinite() || !psi_bar.allFinite()) {
    throw DomainError("SnthParams: non-finite entries");
  }
  if (!(omega.array() > 0.0).all()) {
    throw DomainError("SnthParams: omega must be positive");
  }
  if (!(h.array() >= 0.0).all()) {
    throw DomainError("SnthParams: h must be nonnegative");
  }
  if ((psi_bar.diagonal().array() - 1.0).abs().maxCoeff() > 1e-10) {
    throw DomainError("SnthParams: psi_bar must have unit diagonal");
  }
  if ((psi_bar - psi_bar.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("SnthParams: psi_bar must be symmetric");
  }
  CheckedCholesky(psi_bar, "SnthParams");
}

EsnParams SnthParams::Latent() const {
  EsnParams z;
  z.xi = Vector::Zero(dim());
  z.psi = psi_bar;
  z.eta = eta;
  z.tau = 0.0;
  return z;
}

bool MomentReport::AllDefined() const {
  for (bool b : mean_defined) {
    if (!b) return false;
  }
  return cov_defined.all();
}

SnthDraws SnthSampleDetailed(int n, const SnthParams& p, std::uint64_t seed) {
  p.Validate();
  SnthDraws out;
  out.z = EsnSample(n, p.Latent(), seed);
  out.y.resize(n, p.dim());
  for (int i = 0; i < n; ++i) {
    bool overflow = false;
    for (int j = 0; j < p.dim(); ++j) {
      const double z = out.z(i, j);
      try {
        out.y(i, j) = p.xi(j) + p.omega(j) * TukeyH(z, p.h(j));
      } catch (const OverflowError&) {
        out.y(i, j) = std::copysign(std::numeric_limits<double>::infinity(), z);
        overflow = true;
      }
      if (!overflow && !std::isfinite(out.y(i, j))) {
        out.y(i, j) = std::copysign(std::numeric_limits<double>::infinity(), z);
        overflow = true;
      }
    }
    if (overflow) out.overflow_rows.push_back(i);
  }
  return out;
}

Matrix SnthSample(int n, const SnthParams& p, std::uint64_t seed) {
  SnthDraws d = SnthSampleDetailed(n, p, seed);
  if (!d.overflow_rows.empty()) {
    throw OverflowError("SnthSample: draw overflowed in row " +
                        std::to_string(d.overflow_rows.front()));
  }
  return std::move(d.y);
}

SnthLogDensity::SnthLogDensity(const SnthParams& p)
    : p_(Validated(p)),
      latent_(p.Latent()),
      log_scale_(p.omega.array().log().sum()) {}

double SnthLogDensity::operator()(const Vector& y) const {
  if (y.size() != p_.dim()) throw DomainError("SnthLogPdf: dimension mismatch");
  const Vector x = Standardize(y, p_.xi, p_.omega);
  const Vector g = InvTukeyHVec(x, p_.h);
  double jac = -log_scale_;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    jac += LogInvTukeyHDerivative(x(i), p_.h(i));
  }
  return latent_(g) + jac;
}

double SnthLogPdf(const Vector& y, const SnthParams& p) {
  return SnthLogDensity(p)(y);
}

double SnthCdf(const Vector& y, const SnthParams& p, const Accuracy& acc) {
  p.Validate();
  if (y.size() != p.dim()) throw DomainError("SnthCdf: dimension mismatch");
  Vector g(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    if (std::isnan(y(i))) throw DomainError("SnthCdf: NaN argument");
    if (std::isinf(y(i))) {
      g(i) = y(i);
    } else {
      g(i) = InvTukeyH((y(i) - p.xi(i)) / p.omega(i), p.h(i));
    }
  }
  return SnCdf(g, p.Latent(), acc);
}

SnthParams SnthMarginal(const SnthParams& p, const Index& idx) {
  p.Validate();
  CheckIndex(idx, p.dim(), "SnthMarginal");
  SnthParams out;
  out.xi = Select(p.xi, idx);
  out.omega = Select(p.omega, idx);
  out.psi_bar = Select(p.psi_bar, idx, idx);
  out.eta = Select(p.eta, idx);
  out.h = Select(p.h, idx);
  return out;
}

MomentReport SnthMoments(const SnthParams& p) {
  p.Validate();
  const int d = p.dim();
  MomentReport r;
  r.mean = Vector::Zero(d);
  r.cov = Matrix::Zero(d, d);
  r.mean_defined.assign(d, false);
  r.cov_defined.setConstant(d, d, false);

  // Standardized means E tau_h(Z_i).
  Vector mu0 = Vector::Zero(d);
  Vector s2(d);
  for (int i = 0; i < d; ++i) {
    const double h = p.h(i);
    s2(i) = 1.0 + p.eta(i) * p.eta(i);
    if (h * s2(i) < 1.0) {
      mu0(i) = kSqrt2OverPi * p.eta(i) /
               (std::sqrt(1.0 - h) * (1.0 - h * s2(i)));
      r.mean(i) = p.xi(i) + p.omega(i) * mu0(i);
      r.mean_defined[i] = true;
    }
  }
  for (int i = 0; i < d; ++i) {
    const double h = p.h(i);
    if (2.0 * h * s2(i) < 1.0) {
      const double e2 = s2(i) / std::pow(1.0 - 2.0 * h * s2(i), 1.5);
      r.cov(i, i) = p.omega(i) * p.omega(i) * (e2 - mu0(i) * mu0(i));
      r.cov_defined(i, i) = true;
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!r.mean_defined[i] || !r.mean_defined[j]) continue;
      Eigen::Matrix2d sigma;
      sigma << s2(i), p.psi_bar(i, j) + p.eta(i) * p.eta(j),
          p.psi_bar(i, j) + p.eta(i) * p.eta(j), s2(j);
      const Eigen::Matrix2d hm =
          Eigen::Vector2d(p.h(i), p.h(j)).asDiagonal();
      const Eigen::Matrix2d prec = sigma.inverse() - hm;
      Eigen::LLT<Eigen::Matrix2d> llt(prec);
      if (llt.info() != Eigen::Success) continue;
      const Eigen::Matrix2d a = prec.inverse();
      const double cross =
          std::sqrt(a.determinant() / sigma.determinant()) * a(0, 1);
      r.cov(i, j) = r.cov(j, i) =
          p.omega(i) * p.omega(j) * (cross - mu0(i) * mu0(j));
      r.cov_defined(i, j) = r.cov_defined(j, i) = true;
    }
  }
  return r;
}

SkewKurt SnthSkewKurt(double eta, double h) {
  if (!std::isfinite(eta) || !(h >= 0.0) || !std::isfinite(h)) {
    throw DomainError("SnthSkewKurt: invalid eta or h");
  }
  const double s2 = 1.0 + eta * eta;
  SkewKurt out;
  if (!(3.0 * h * s2 < 1.0)) return out;
  // Raw moments of tau_h(Z), Z ~ SN(0, 1, eta).
  const double e1 =
      kSqrt2OverPi * eta / (std::sqrt(1.0 - h) * (1.0 - h * s2));
  const double e2 = s2 / std::pow(1.0 - 2.0 * h * s2, 1.5);
  const double b3 = 1.0 - 3.0 * h * s2;
  const double e3 = kSqrt2OverPi * std::pow(s2, 1.5) / (b3 * b3) *
                    (2.0 * eta * eta * eta + 3.0 * eta * b3) /
                    std::pow(s2 * (1.0 - 3.0 * h), 1.5);
  const double mu2 = e2 - e1 * e1;
  const double mu3 = e3 - 3.0 * e2 * e1 + 2.0 * e1 * e1 * e1;
  out.gamma1 = mu3 / std::pow(mu2, 1.5);
  if (4.0 * h * s2 < 1.0) {
    const double e4 = 3.0 * s2 * s2 / std::pow(1.0 - 4.0 * h * s2, 2.5);
    const double mu4 =
        e4 - 4.0 * e3 * e1 + 6.0 * e2 * e1 * e1 - 3.0 * std::pow(e1, 4);
    out.gamma2 = mu4 / (mu2 * mu2) - 3.0;
  }
  return out;
}

SkewKurt SnthSkewKurt(const SnthParams& p) {
  p.Validate();
  if (p.dim() != 1) throw DomainError("SnthSkewKurt: dimension must be 1");
  return SnthSkewKurt(p.eta(0), p.h(0));
}

SnthConditional SnthCondition(const SnthParams& p, const Split& split,
                              const Vector& y2) {
  p.Validate();
  split.Validate(p.dim());
  if (y2.size() != static_cast<Eigen::Index>(split.block2.size())) {
    throw DomainError("SnthCondition: y2 has the wrong dimension");
  }
  if (!y2.allFinite()) throw DomainError("SnthCondition: y2 must be finite");
  const Vector g2 =
      InvTukeyHVec(Standardize(y2, Select(p.xi, split.block2),
                               Select(p.omega, split.block2)),
                   Select(p.h, split.block2));
  SnthConditional c;
  c.base = SnConditional(p.Latent(), split, g2);
  c.h1 = Select(p.h, split.block1);
  c.xi1 = Select(p.xi, split.block1);
  c.omega1 = Select(p.omega, split.block1);
  return c;
}

double SnthConditionalLogPdf(const Vector& y1, const SnthConditional& c) {
  if (y1.size() != c.dim()) {
    throw DomainError("SnthConditionalLogPdf: dimension mismatch");
  }
  const Vector x = Standardize(y1, c.xi1, c.omega1);
  return EsnLogPdf(InvTukeyHVec(x, c.h1), c.base) +
         LogJacobian(x, c.omega1, c.h1);
}

Matrix SnthConditionalSample(int n, const SnthConditional& c,
                             std::uint64_t seed) {
  Matrix y = EsnSample(n, c.base, seed);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < c.dim(); ++j) {
      y(i, j) = c.xi1(j) + c.omega1(j) * TukeyH(y(i, j), c.h1(j));
    }
  }
  return y;
}

MomentReport SnthConditionalMoments(const SnthConditional& c) {
  c.base.Validate();
  const int d = c.dim();
  if (c.h1.size() != d || c.xi1.size() != d || c.omega1.size() != d) {
    throw DomainError("SnthConditionalMoments: dimension mismatch");
  }
  MomentReport r;
  r.mean = Vector::Zero(d);
  r.cov = Matrix::Zero(d, d);
  r.mean_defined.assign(d, false);
  r.cov_defined.setConstant(d, d, false);

  Vector raw1 = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    const EsnParams bi = EsnBlock(c.base, {i});
    const double s2 = bi.psi(0, 0) + bi.eta(0) * bi.eta(0);
    const double h = c.h1(i);
    if (h * s2 < 1.0) {
      raw1(i) = TiltedMoments(bi, Matrix::Constant(1, 1, h)).first(0);
      r.mean(i) = c.xi1(i) + c.omega1(i) * raw1(i);
      r.mean_defined[i] = true;
    }
    if (2.0 * h * s2 < 1.0) {
      const double raw2 =
          TiltedMoments(bi, Matrix::Constant(1, 1, 2.0 * h)).second(0, 0);
      r.cov(i, i) = c.omega1(i) * c.omega1(i) * (raw2 - raw1(i) * raw1(i));
      r.cov_defined(i, i) = true;
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!r.mean_defined[i] || !r.mean_defined[j]) continue;
      const EsnParams bij = EsnBlock(c.base, {i, j});
      const Matrix hm = Eigen::Vector2d(c.h1(i), c.h1(j)).asDiagonal();
      const Tilted t = TiltedMoments(bij, hm);
      if (!t.finite) continue;
      r.cov(i, j) = r.cov(j, i) =
          c.omega1(i) * c.omega1(j) * (t.second(0, 1) - raw1(i) * raw1(j));
      r.cov_defined(i, j) = r.cov_defined(j, i) = true;
    }
  }
  return r;
}

SnthCanonicalForm SnthCanonical(const SnthParams& p) {
  p.Validate();
  const SnCanonicalForm sn = SnCanonical(p.Latent());
  SnthCanonicalForm out;
  out.h_star = sn.h_star;
  out.canon.xi = Vector::Zero(p.dim());
  out.canon.omega = Vector::Ones(p.dim());
  out.canon.psi_bar = Matrix::Identity(p.dim(), p.dim());
  out.canon.eta = sn.canon.eta;
  out.canon.h = p.h;
  return out;
}

Vector ToCanonical(const Vector& y, const SnthParams& p,
                   const SnthCanonicalForm& form) {
  const Vector z = form.h_star * InvTukeyHVec(Standardize(y, p.xi, p.omega), p.h);
  Vector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = TukeyH(z(i), p.h(i));
  return out;
}

}  // namespace snth

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

#include "snth/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

#include "snth/error.hpp"
#include "snth/linalg.hpp"
#include "snth/optimize.hpp"
#include "snth/special.hpp"

namespace snth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogHMin = -30.0;
constexpr double kLogHMax = 5.0;
// Estimates of h below this are treated as lying on the boundary.
constexpr double kHBoundary = 1e-6;
constexpr int kMinRows = 10;

bool EtaFree(Submodel s) { return s == Submodel::kFull || s == Submodel::kHZero; }
bool HFree(Submodel s) { return s == Submodel::kFull || s == Submodel::kEtaZero; }

void CheckFinite(const Matrix& data, const char* what) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw DomainError(std::string(what) + ": empty data");
  }
  if (!data.allFinite()) {
    throw DomainError(std::string(what) + ": data contain non-finite values");
  }
}

// Latent values and summed log Jacobian of one column.
void TransformColumn(const Eigen::Ref<const Vector>& col, double xi, double omega,
                     double h, Eigen::Ref<Vector> g, double* log_jac) {
  double s = -static_cast<double>(col.size()) * std::log(omega);
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double x = (col(i) - xi) / omega;
    g(i) = InvTukeyH(x, h);
    s += LogInvTukeyHDerivative(x, h);
  }
  *log_jac = s;
}

// Sum over rows of g of the SN(0, psi, eta) log density.
double SnLogLikSum(const Matrix& g, const Matrix& psi, const Vector& eta) {
  const Eigen::Index n = g.rows();
  const Eigen::Index p = g.cols();
  const Eigen::LLT<Matrix> llt(psi);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("scale matrix is not positive definite");
  }
  const Matrix x = llt.matrixL().solve(g.transpose());
  const Vector le = llt.matrixL().solve(eta);
  const double one_plus_q = 1.0 + le.squaredNorm();
  const Vector b = x.transpose() * le;
  const double log_det = LogDet(llt) + std::log(one_plus_q);
  const double root = std::sqrt(one_plus_q);
  double s = static_cast<double>(n) *
             (std::numbers::ln2 - 0.5 * static_cast<double>(p) *
                                      std::log(2.0 * std::numbers::pi) -
              0.5 * log_det);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double quad = x.col(i).squaredNorm() - b(i) * b(i) / one_plus_q;
    s += -0.5 * quad + LogNormCdf(b(i) / root);
  }
  return s;
}

// Negative log-likelihood with per-column caching of the latent transform,
// which only depends on (xi_j, omega_j, h_j).
class JointObjective {
 public:
  explicit JointObjective(const Matrix& data)
      : data_(data),
        g_(data.rows(), data.cols()),
        jac_(Vector::Zero(data.cols())),
        keys_(data.cols(), {kInf, kInf, kInf}) {}

  double LogLik(const SnthParams& p) {
    for (Eigen::Index j = 0; j < data_.cols(); ++j) {
      const std::array<double, 3> key{p.xi(j), p.omega(j), p.h(j)};
      if (key != keys_[j]) {
        keys_[j] = {kInf, kInf, kInf};
        TransformColumn(data_.col(j), key[0], key[1], key[2], g_.col(j), &jac_(j));
        keys_[j] = key;
      }
    }
    return SnLogLikSum(g_, p.psi_bar, p.eta) + jac_.sum();
  }

 private:
  const Matrix& data_;
  Matrix g_;
  Vector jac_;
  std::vector<std::array<double, 3>> keys_;
};

// Unconstrained chart: xi, log omega, angles of the correlation Cholesky
// factor (logit of angle / pi), eta, log h.
class Chart {
 public:
  Chart(int p, Submodel s) : p_(p), m_(p * (p - 1) / 2), sub_(s) {
    for (int i = 0; i < Size(); ++i) {
      const bool is_eta = i >= EtaOff() && i < HOff();
      const bool is_h = i >= HOff();
      if ((is_eta && !EtaFree(s)) || (is_h && !HFree(s))) continue;
      free_.push_back(i);
    }
  }

  int Size() const { return 4 * p_ + m_; }
  int AngleOff() const { return 2 * p_; }
  int EtaOff() const { return 2 * p_ + m_; }
  int HOff() const { return 3 * p_ + m_; }
  const std::vector<int>& Free() const { return free_; }

  Vector Pack(const SnthParams& sp) const {
    Vector t = Vector::Zero(Size());
    for (int j = 0; j < p_; ++j) {
      t(j) = sp.xi(j);
      t(p_ + j) = std::log(sp.omega(j));
      t(EtaOff() + j) = EtaFree(sub_) ? sp.eta(j) : 0.0;
      t(HOff() + j) = HFree(sub_) ? std::clamp(std::log(sp.h(j)), kLogHMin, kLogHMax)
                                  : kLogHMin;
    }
    const Matrix l = Eigen::LLT<Matrix>(sp.psi_bar).matrixL();
    int k = AngleOff();
    for (int i = 1; i < p_; ++i) {
      const double norm = l.row(i).norm();
      double rest = 1.0;
      for (int c = 0; c < i; ++c) {
        const double cosv = std::clamp(l(i, c) / norm / rest, -1.0, 1.0);
        const double ang = std::clamp(std::acos(cosv), 1e-12, std::numbers::pi - 1e-12);
        t(k++) = std::log(ang / (std::numbers::pi - ang));
        rest *= std::sin(ang);
      }
    }
    return t;
  }

  // Returns false when log h leaves its box.
  bool Unpack(const Vector& t, SnthParams* sp) const {
    sp->xi = t.head(p_);
    sp->omega = t.segment(p_, p_).array().exp();
    sp->eta = EtaFree(sub_) ? Vector(t.segment(EtaOff(), p_)) : Vector::Zero(p_);
    sp->h = Vector::Zero(p_);
    if (HFree(sub_)) {
      for (int j = 0; j < p_; ++j) {
        const double u = t(HOff() + j);
        if (!(u >= kLogHMin && u <= kLogHMax)) return false;
        sp->h(j) = std::exp(u);
      }
    }
    Matrix l = Matrix::Zero(p_, p_);
    l(0, 0) = 1.0;
    int k = AngleOff();
    for (int i = 1; i < p_; ++i) {
      double rest = 1.0;
      for (int c = 0; c < i; ++c) {
        const double ang = std::numbers::pi / (1.0 + std::exp(-t(k++)));
        l(i, c) = rest * std::cos(ang);
        rest *= std::sin(ang);
      }
      l(i, i) = rest;
    }
    sp->psi_bar = l * l.transpose();
    sp->psi_bar.diagonal().setOnes();
    return sp->omega.allFinite();
  }

  Vector Expand(const Vector& base, const Vector& free_vals) const {
    Vector t = base;
    for (size_t i = 0; i < free_.size(); ++i) t(free_[i]) = free_vals(i);
    return t;
  }

  Vector Restrict(const Vector& t) const {
    Vector v(free_.size());
    for (size_t i = 0; i < free_.size(); ++i) v(i) = t(free_[i]);
    return v;
  }

  // Natural parameters: xi, omega, upper off-diagonals of psi_bar, eta, h.
  Vector Natural(const SnthParams& sp) const {
    Vector v(Size());
    v.head(p_) = sp.xi;
    v.segment(p_, p_) = sp.omega;
    int k = AngleOff();
    for (int i = 0; i < p_; ++i) {
      for (int j = i + 1; j < p_; ++j) v(k++) = sp.psi_bar(i, j);
    }
    v.segment(EtaOff(), p_) = sp.eta;
    v.segment(HOff(), p_) = sp.h;
    return v;
  }

  void RemoveFree(int idx) { free_.erase(std::find(free_.begin(), free_.end(), idx)); }

 private:
  int p_;
  int m_;
  Submodel sub_;
  std::vector<int> free_;
};

double Median(std::vector<double> v) {
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

struct ColumnFit {
  double xi = 0.0;
  double omega = 1.0;
  double eta = 0.0;
  double h = 0.0;
  double loglik = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

ColumnFit FitColumn(const Vector& col, const FitConfig& cfg) {
  const Eigen::Index n = col.size();
  if (n < kMinRows) {
    throw DomainError("at least " + std::to_string(kMinRows) + " rows are required");
  }
  const double mean = col.mean();
  const double var = (col.array() - mean).square().mean();
  if (!(var > 0.0)) throw DomainError("column is constant");

  ColumnFit out;
  if (cfg.submodel == Submodel::kGaussian) {
    out.xi = mean;
    out.omega = std::sqrt(var);
    out.loglik = MarginalLogLik(col, out.xi, out.omega, 0.0, 0.0);
    out.converged = true;
    return out;
  }

  const std::vector<double> vals(col.data(), col.data() + n);
  const double xi0 = Median(vals);
  std::vector<double> dev(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) dev[i] = std::fabs(vals[i] - xi0);
  double omega0 = 1.4826 * Median(dev);
  if (!(omega0 > 0.0)) omega0 = std::sqrt(var);
  const double skew = (col.array() - mean).cube().mean();
  const double sign = skew < 0.0 ? -1.0 : 1.0;

  const bool eta_free = EtaFree(cfg.submodel);
  const bool h_free = HFree(cfg.submodel);
  const int dim = 2 + (eta_free ? 1 : 0) + (h_free ? 1 : 0);
  const int eta_at = 2;
  const int h_at = eta_free ? 3 : 2;

  auto decode = [&](const Vector& v, double* xi, double* omega, double* eta,
                    double* h) {
    *xi = xi0 + omega0 * v(0);
    *omega = omega0 * std::exp(v(1));
    *eta = eta_free ? v(eta_at) : 0.0;
    *h = 0.0;
    if (h_free) {
      if (!(v(h_at) >= kLogHMin && v(h_at) <= kLogHMax)) return false;
      *h = std::exp(v(h_at));
    }
    return std::isfinite(*omega) && *omega > 0.0;
  };
  const Objective objective = [&](const Vector& v) {
    double xi, omega, eta, h;
    if (!decode(v, &xi, &omega, &eta, &h)) return kInf;
    try {
      const double ll = MarginalLogLik(col, xi, omega, eta, h);
      return std::isfinite(ll) ? -ll / static_cast<double>(n) : kInf;
    } catch (const Error&) {
      return kInf;
    }
  };

  NelderMeadOptions nm;
  nm.f_tol = 1e-2 * cfg.optimizer_tol;
  nm.x_tol = 1e2 * cfg.optimizer_tol;
  nm.max_evaluations = cfg.optimizer_max_eval;
  Vector step(dim);
  step(0) = 0.5;
  step(1) = 0.3;
  if (eta_free) step(eta_at) = 0.5;
  if (h_free) step(h_at) = 1.0;

  std::vector<double> eta_starts{0.0};
  if (eta_free) eta_starts = {0.0, sign, 2.0 * sign};

  OptimResult best;
  best.value = kInf;
  auto polish = [&](OptimResult r) {
    for (int k = 0; k < 3; ++k) {
      OptimResult again = NelderMead(objective, r.x, step, nm);
      const bool small = r.value - again.value <= nm.f_tol;
      if (again.value <= r.value) r = again;
      if (small) break;
    }
    return r;
  };
  for (double e0 : eta_starts) {
    Vector x0 = Vector::Zero(dim);
    if (eta_free) x0(eta_at) = e0;
    if (h_free) x0(h_at) = std::log(0.05);
    const OptimResult r = polish(NelderMead(objective, x0, step, nm));
    if (r.value < best.value) best = r;
  }
  if (!std::isfinite(best.value)) throw NumericalError("no finite likelihood found");

  // Post hoc first-order check on the interior coordinates.
  auto grad_norm = [&](const Vector& x) {
    const Vector g = NumericalGradient(objective, x, 1e-6);
    double m = 0.0;
    for (int i = 0; i < dim; ++i) {
      if (h_free && i == h_at && x(i) <= kLogHMin + 1.0) continue;
      m = std::max(m, std::fabs(g(i)));
    }
    return g.allFinite() ? m : kInf;
  };
  double gn = grad_norm(best.x);
  if (gn > 1e-4) {
    const OptimResult r = polish(best);
    if (r.value <= best.value) best = r;
    gn = grad_norm(best.x);
  }
  decode(best.x, &out.xi, &out.omega, &out.eta, &out.h);
  out.loglik = -best.value * static_cast<double>(n);
  out.grad_norm = gn;
  out.converged = best.converged && gn <= 1e-3;
  return out;
}

SnthParams Assemble(const MarginalFit& mf, const Matrix& psi_bar) {
  SnthParams sp;
  sp.xi = mf.xi;
  sp.omega = mf.omega;
  sp.psi_bar = psi_bar;
  sp.eta = mf.eta;
  sp.h = mf.h;
  return sp;
}

}  // namespace

void FitConfig::Validate() const {
  if (!(em_rel_tol > 0.0) || !(optimizer_tol > 0.0) || !(hessian_step > 0.0)) {
    throw DomainError("FitConfig: tolerances must be positive");
  }
  if (em_max_iter < 1 || optimizer_max_eval < 1) {
    throw DomainError("FitConfig: iteration limits must be positive");
  }
}

double FullLogLik(const Matrix& data, const SnthParams& p) {
  p.Validate();
  CheckFinite(data, "FullLogLik");
  if (data.cols() != p.dim()) throw DomainError("FullLogLik: dimension mismatch");
  JointObjective obj(data);
  return obj.LogLik(p);
}

double MarginalLogLik(const Vector& col, double xi, double omega, double eta,
                      double h) {
  if (!(omega > 0.0) || !(h >= 0.0) || !std::isfinite(xi) || !std::isfinite(eta) ||
      !std::isfinite(omega) || !std::isfinite(h)) {
    throw DomainError("MarginalLogLik: invalid parameters");
  }
  if (col.size() < 1 || !col.allFinite()) {
    throw DomainError("MarginalLogLik: empty or non-finite data");
  }
  Matrix g(col.size(), 1);
  double log_jac = 0.0;
  TransformColumn(col, xi, omega, h, g.col(0), &log_jac);
  return SnLogLikSum(g, Matrix::Identity(1, 1), Vector::Constant(1, eta)) + log_jac;
}

MarginalFit FitMarginals(const Matrix& data, const FitConfig& cfg) {
  cfg.Validate();
  CheckFinite(data, "FitMarginals");
  const Eigen::Index p = data.cols();
  std::vector<std::future<ColumnFit>> jobs;
  jobs.reserve(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    jobs.push_back(std::async(std::launch::async, [&data, &cfg, j] {
      return FitColumn(data.col(j), cfg);
    }));
  }
  MarginalFit mf;
  mf.xi.resize(p);
  mf.omega.resize(p);
  mf.eta.resize(p);
  mf.h.resize(p);
  mf.loglik.resize(p);
  mf.grad_norm.resize(p);
  mf.converged.resize(p);
  std::string failure;
  for (Eigen::Index j = 0; j < p; ++j) {
    try {
      const ColumnFit c = jobs[j].get();
      mf.xi(j) = c.xi;
      mf.omega(j) = c.omega;
      mf.eta(j) = c.eta;
      mf.h(j) = c.h;
      mf.loglik(j) = c.loglik;
      mf.grad_norm(j) = c.grad_norm;
      mf.converged[j] = c.converged;
    } catch (const Error& e) {
      if (failure.empty()) failure = "column " + std::to_string(j) + ": " + e.what();
    }
  }
  if (!failure.empty()) throw DomainError("FitMarginals: " + failure);
  return mf;
}

Matrix ReconstructLatent(const Matrix& data, const Vector& xi, const Vector& omega,
                         const Vector& h) {
  CheckFinite(data, "ReconstructLatent");
  const Eigen::Index p = data.cols();
  if (xi.size() != p || omega.size() != p || h.size() != p) {
    throw DomainError("ReconstructLatent: dimension mismatch");
  }
  if (!(omega.array() > 0.0).all() || !(h.array() >= 0.0).all()) {
    throw DomainError("ReconstructLatent: invalid parameters");
  }
  Matrix z(data.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double unused = 0.0;
    TransformColumn(data.col(j), xi(j), omega(j), h(j), z.col(j), &unused);
  }
  return z;
}

EmResult EmSnScale(const Matrix& z, const Vector& eta0, const FitConfig& cfg) {
  cfg.Validate();
  CheckFinite(z, "EmSnScale");
  const Eigen::Index n = z.rows();
  const Eigen::Index p = z.cols();
  if (eta0.size() != p || !eta0.allFinite()) {
    throw DomainError("EmSnScale: eta0 dimension mismatch");
  }
  const double nd = static_cast<double>(n);
  const Matrix s = z.transpose() * z / nd;
  const Matrix e2 = eta0 * eta0.transpose();

  EmResult out;
  Matrix psi;
  for (double c = 1.0;; c *= 0.5) {
    psi = s - c * e2;
    if (IsPositiveDefinite(psi)) break;
    if (c < 1e-8) throw NumericalError("EmSnScale: second-moment matrix is singular");
  }
  double ll = SnLogLikSum(z, psi, eta0);
  out.trace.push_back(ll);

  while (out.iterations < cfg.em_max_iter) {
    const Eigen::LLT<Matrix> llt(psi);
    const Vector lam_eta = llt.solve(eta0);
    const double alpha_sq = eta0.dot(lam_eta);
    const double root = std::sqrt(1.0 + alpha_sq);
    const Vector tau_bar = z * lam_eta / root;
    Vector v1(n);
    double v2_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const TruncatedMoments m = TruncatedNormalMoments(tau_bar(i), alpha_sq);
      v1(i) = m.v1;
      v2_sum += m.v2;
    }
    const Vector zv = z.transpose() * v1 / nd;
    const Matrix next =
        s + e2 * (v2_sum / nd) - (eta0 * zv.transpose() + zv * eta0.transpose());
    ++out.iterations;
    if (!IsPositiveDefinite(next)) {
      out.message = "update is not positive definite";
      break;
    }
    const double ll_next = SnLogLikSum(z, next, eta0);
    psi = next;
    out.trace.push_back(ll_next);
    const bool done = std::fabs(ll_next / ll - 1.0) < cfg.em_rel_tol;
    ll = ll_next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && out.message.empty()) out.message = "iteration limit reached";
  out.psi_cov = psi;
  out.psi_bar = CovToCorr(psi);
  return out;
}

FitResult Fit(const Matrix& data, const FitConfig& cfg,
              const std::vector<SnthParams>& extra_starts) {
  cfg.Validate();
  CheckFinite(data, "Fit");
  const int p = static_cast<int>(data.cols());

  FitResult r;
  r.submodel = cfg.submodel;
  r.k = ParameterCount(p, cfg.submodel);
  r.marginals = FitMarginals(data, cfg);
  const Matrix z = ReconstructLatent(data, r.marginals.xi, r.marginals.omega,
                                     r.marginals.h);
  const EmResult em = EmSnScale(z, r.marginals.eta, cfg);
  r.em_trace = em.trace;
  r.em_iterations = em.iterations;
  r.em_converged = em.converged;
  r.stage1_params = Assemble(r.marginals, em.psi_bar);
  r.stage1_loglik = FullLogLik(data, r.stage1_params);
  r.params = r.stage1_params;
  r.loglik = r.stage1_loglik;
  r.stage = Stage::kMarginalEm;
  if (!em.converged) r.message = "EM: " + em.message;

  bool joint_ok = true;
  if (cfg.do_joint_mle) {
    try {
      const Chart chart(p, cfg.submodel);
      JointObjective obj(data);
      Vector base;
      double best_start = -kInf;
      std::vector<SnthParams> starts{r.stage1_params};
      for (const SnthParams& s : extra_starts) {
        if (s.dim() != p) throw DomainError("Fit: start has wrong dimension");
        starts.push_back(s);
      }
      for (const SnthParams& s : starts) {
        const Vector t = chart.Pack(s);
        SnthParams sp;
        if (!chart.Unpack(t, &sp)) continue;
        double ll = -kInf;
        try {
          ll = obj.LogLik(sp);
        } catch (const Error&) {
        }
        if (ll > best_start) {
          best_start = ll;
          base = t;
        }
      }
      if (base.size() == 0) throw NumericalError("no valid starting point");
      const Objective f = [&](const Vector& v) {
        SnthParams sp;
        if (!chart.Unpack(chart.Expand(base, v), &sp)) return kInf;
        try {
          const double ll = obj.LogLik(sp);
          return std::isfinite(ll) ? -ll : kInf;
        } catch (const Error&) {
          return kInf;
        }
      };
      BfgsOptions opt;
      opt.f_tol = 1e-2 * cfg.optimizer_tol;
      opt.g_tol = 1e3 * cfg.optimizer_tol;
      opt.max_evaluations = cfg.optimizer_max_eval;
      const OptimResult res = Bfgs(f, chart.Restrict(base), opt);
      r.joint_converged = res.converged;
      r.joint_evaluations = res.evaluations;
      SnthParams sp;
      if (chart.Unpack(chart.Expand(base, res.x), &sp) && -res.value >= r.loglik) {
        r.params = sp;
        r.loglik = -res.value;
      }
      r.stage = Stage::kJointMle;
      if (!res.converged) {
        if (!r.message.empty()) r.message += "; ";
        r.message += "joint optimizer did not converge";
      }
    } catch (const Error& e) {
      joint_ok = false;
      if (!r.message.empty()) r.message += "; ";
      r.message += std::string("joint stage failed: ") + e.what();
    }
  }
  r.aic = Aic(r.loglik, r.k);
  bool marg_ok = true;
  for (bool c : r.marginals.converged) marg_ok = marg_ok && c;
  if (!marg_ok) {
    if (!r.message.empty()) r.message += "; ";
    r.message += "marginal optimizer did not converge";
  }
  r.converged = marg_ok && em.converged && joint_ok &&
                (!cfg.do_joint_mle || r.joint_converged);
  if (cfg.compute_stderr) {
    const StdErrorResult se = StandardErrors(data, r.params, cfg);
    r.stderr_ = se.se;
    r.stderr_diagnostic = se.diagnostic;
  }
  return r;
}

StdErrorResult StandardErrors(const Matrix& data, const SnthParams& p,
                              const FitConfig& cfg) {
  cfg.Validate();
  p.Validate();
  CheckFinite(data, "StandardErrors");
  if (data.cols() != p.dim()) throw DomainError("StandardErrors: dimension mismatch");
  const int d = p.dim();
  Chart chart(d, cfg.submodel);
  const Vector base = chart.Pack(p);

  StdErrorResult out;
  SnthStdErrors se;
  se.h_unreliable.assign(d, false);
  if (HFree(cfg.submodel)) {
    for (int j = 0; j < d; ++j) {
      if (p.h(j) < kHBoundary) {
        se.h_unreliable[j] = true;
        chart.RemoveFree(chart.HOff() + j);
      }
    }
  }

  JointObjective obj(data);
  const Objective f = [&](const Vector& v) {
    SnthParams sp;
    if (!chart.Unpack(chart.Expand(base, v), &sp)) return kInf;
    try {
      return -obj.LogLik(sp);
    } catch (const Error&) {
      return kInf;
    }
  };
  const Vector x = chart.Restrict(base);
  const Eigen::Index k = x.size();
  Matrix hess = NumericalHessian(f, x, cfg.hessian_step);
  hess = 0.5 * (hess + hess.transpose());
  const Eigen::LLT<Matrix> llt(hess);
  if (!hess.allFinite() || llt.info() != Eigen::Success) {
    out.diagnostic = "observed information is not positive definite";
    return out;
  }
  const Matrix cov = llt.solve(Matrix::Identity(k, k));

  // Delta method through a central-difference Jacobian of the natural
  // parameters.
  SnthParams sp;
  Matrix jac(chart.Size(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double step = 1e-6 * std::max(1.0, std::fabs(x(i)));
    Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    SnthParams a, b;
    if (!chart.Unpack(chart.Expand(base, xp), &a) ||
        !chart.Unpack(chart.Expand(base, xm), &b)) {
      out.diagnostic = "parameter lies on the boundary of its domain";
      return out;
    }
    jac.col(i) = (chart.Natural(a) - chart.Natural(b)) / (2.0 * step);
  }
  const Vector var = (jac * cov * jac.transpose()).diagonal();
  const Vector sd = var.cwiseMax(0.0).cwiseSqrt();
  se.xi = sd.head(d);
  se.omega = sd.segment(d, d);
  se.psi_bar = Matrix::Zero(d, d);
  int idx = chart.AngleOff();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) se.psi_bar(i, j) = se.psi_bar(j, i) = sd(idx++);
  }
  se.eta = sd.segment(chart.EtaOff(), d);
  se.h = sd.segment(chart.HOff(), d);
  for (int j = 0; j < d; ++j) {
    if (se.h_unreliable[j]) se.h(j) = std::numeric_limits<double>::quiet_NaN();
  }
  out.se = se;
  return out;
}

TestResult Lrt(const Matrix& data, TestMode mode, const FitConfig& cfg) {
  cfg.Validate();
  CheckFinite(data, "Lrt");
  const int p = static_cast<int>(data.cols());
  FitConfig base = cfg;
  base.compute_stderr = false;
  TestResult t;
  t.mode = mode;

  if (mode == TestMode::kJointBonferroni) {
    t.df = 2;
    double min_p = 1.0;
    for (int j = 0; j < p; ++j) {
      const Matrix col = data.col(j);
      FitConfig null_cfg = base;
      null_cfg.submodel = Submodel::kGaussian;
      const FitResult null_fit = Fit(col, null_cfg);
      FitConfig alt_cfg = base;
      alt_cfg.submodel = Submodel::kFull;
      const FitResult alt_fit = Fit(col, alt_cfg, {null_fit.params});
      const double stat = std::max(0.0, 2.0 * (alt_fit.loglik - null_fit.loglik));
      const double pv = ChiSquareSf(stat, 2);
      t.margin_statistics.push_back(stat);
      t.margin_p_values.push_back(pv);
      t.statistic = std::max(t.statistic, stat);
      t.loglik_null += null_fit.loglik;
      t.loglik_alt += alt_fit.loglik;
      min_p = std::min(min_p, pv);
    }
    t.p_value = std::min(1.0, static_cast<double>(p) * min_p);
    return t;
  }

  FitConfig null_cfg = base;
  null_cfg.submodel = mode == TestMode::kEtaGivenH ? Submodel::kEtaZero
                                                    : Submodel::kHZero;
  const FitResult null_fit = Fit(data, null_cfg);
  FitConfig alt_cfg = base;
  alt_cfg.submodel = Submodel::kFull;
  const FitResult alt_fit = Fit(data, alt_cfg, {null_fit.params});
  t.loglik_null = null_fit.loglik;
  t.loglik_alt = alt_fit.loglik;
  t.statistic = std::max(0.0, 2.0 * (alt_fit.loglik - null_fit.loglik));
  t.df = p;
  t.p_value = ChiSquareSf(t.statistic, t.df);
  return t;
}

double Aic(double loglik, int k) {
  if (k < 1) throw DomainError("Aic: k must be >= 1");
  return 2.0 * k - 2.0 * loglik;
}

int ParameterCount(int p, Submodel submodel) {
  if (p < 1) throw DomainError("ParameterCount: p must be >= 1");
  int k = 4 * p + p * (p - 1) / 2;
  if (!EtaFree(submodel)) k -= p;
  if (!HFree(submodel)) k -= p;
  return k;
}

double ChiSquareSf(double x, int df) {
  if (df < 1) throw DomainError("ChiSquareSf: df must be >= 1");
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

const char* ToString(Stage s) {
  return s == Stage::kJointMle ? "joint_mle" : "marginal_em";
}

const char* ToString(Submodel s) {
  switch (s) {
    case Submodel::kFull: return "full";
    case Submodel::kEtaZero: return "eta_zero";
    case Submodel::kHZero: return "h_zero";
    case Submodel::kGaussian: return "gaussian";
  }
  return "full";
}

const char* ToString(TestMode m) {
  switch (m) {
    case TestMode::kEtaGivenH: return "eta_given_h";
    case TestMode::kHGivenEta: return "h_given_eta";
    case TestMode::kJointBonferroni: return "joint_bonferroni";
  }
  return "eta_given_h";
}

}  // namespace snth

#include "regret/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

namespace {

constexpr double kKappaFloor = -1e-9;
constexpr double kDeltaZeroTol = 1e-9;
// Internal fixed seed of the mixture-tail reference sampler.
constexpr std::uint64_t kMixtureSeed = 0x9d2c5680c4a7e57fULL;
constexpr int kMixtureDraws = 1000000;

/// theta -> expected cost of the plug-in decision under `dist`.
double v0_of_theta(const Instance& inst, const TrueDistribution& dist,
                   const Vec& theta) {
  const Decision dec =
      oracle_decision(inst.cost, *inst.family, theta, inst.oracle, inst.quad);
  return expected_cost(inst.cost, dist, dec.omega, inst.quad);
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central-difference Hessian with the pinned step max(1e-4, 1e-4 ||x||).
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x) {
  const int q = static_cast<int>(x.size());
  const double h = std::max(1e-4, 1e-4 * x.norm());
  const double f0 = f(x);
  Mat hess(q, q);
  for (int i = 0; i < q; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    hess(i, i) = (f(xp) + f(xm) - 2.0 * f0) / (h * h);
    for (int j = i + 1; j < q; ++j) {
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h;
      xpp[j] += h;
      xpm[i] += h;
      xpm[j] -= h;
      xmp[i] -= h;
      xmp[j] += h;
      xmm[i] -= h;
      xmm[j] -= h;
      const double v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return symmetrize(hess);
}

/// Expectation of the log-density Hessian under `p` at theta.
Mat mean_log_density_hessian(const TrueDistribution& p,
                             const ParamFamily& fam, const Vec& theta) {
  if (fam.is_gaussian()) return -fam.cov_inv();
  if (!p.is_atomic()) {
    throw DomainError(
        "a finite-discrete family needs an atomic true distribution");
  }
  Mat acc = Mat::Zero(fam.param_dim(), fam.param_dim());
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    acc += w[static_cast<std::size_t>(i)] *
           fam.log_density_hessian(theta, rows.row(i).transpose());
  }
  return acc;
}

/// Variance of the score under `p` at theta.
Mat score_variance(const TrueDistribution& p, const ParamFamily& fam,
                   const Vec& theta) {
  if (fam.is_gaussian()) {
    return fam.cov_inv() * p.covariance() * fam.cov_inv();
  }
  if (!p.is_atomic()) {
    throw DomainError(
        "a finite-discrete family needs an atomic true distribution");
  }
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  Vec mean = Vec::Zero(fam.param_dim());
  Mat second = Mat::Zero(fam.param_dim(), fam.param_dim());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Vec s = fam.score(theta, rows.row(i).transpose());
    mean += w[static_cast<std::size_t>(i)] * s;
    second += w[static_cast<std::size_t>(i)] * s * s.transpose();
  }
  return symmetrize(second - mean * mean.transpose());
}

Mat inverse_spd(const Mat& a) {
  const Mat id = Mat::Identity(a.rows(), a.cols());
  return solve_spd(a, id);
}

/// Sandwich square root (H^-1 V H^-1)^{1/2} for H negative definite
/// (log-likelihood curvature): the sign cancels in the sandwich.
Mat sandwich_sqrt_negdef(const Mat& h, const Mat& v) {
  const Mat ni = inverse_spd(-h);
  return sym_sqrt(symmetrize(ni * v * ni));
}

Mat sandwich_sqrt_posdef(const Mat& h, const Mat& v) {
  const Mat hi = inverse_spd(h);
  return sym_sqrt(symmetrize(hi * v * hi));
}

std::vector<double> spectrum_descending(const Mat& a) {
  const Vec ev = sym_eigs(a);
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace

void ChiSqMixture::validate() const {
  if (weights.empty()) throw DomainError("chi-square mixture has no weights");
  if (!signed_mixture) {
    for (double w : weights) {
      if (w < 0.0) {
        throw DomainError(
            "chi-square mixture weight is negative but the mixture is not "
            "marked signed");
      }
    }
  }
}

Vec theta_kl(const TrueDistribution& p, const ParamFamily& family) {
  if (family.is_gaussian()) {
    const Vec theta = p.mean();
    family.validate_theta(theta);
    if (!family.theta_interior(theta)) {
      throw DomainError("theta_kl: maximizer sits on the parameter boundary");
    }
    return theta;
  }
  if (!p.is_atomic()) {
    throw DomainError(
        "theta_kl: finite-discrete family requires an atomic true law");
  }
  Vec theta = Vec::Zero(family.param_dim());
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    theta[family.atom_index(rows.row(i).transpose())] +=
        w[static_cast<std::size_t>(i)];
  }
  return theta;
}

Vec theta_star(const Instance& inst, const Vec& theta_kl_point) {
  inst.validate();
  const ParamFamily& fam = *inst.family;
  auto f = [&](const Vec& th) { return v0_of_theta(inst, inst.truth, th); };

  std::vector<Vec> starts;
  if (inst.cost.kind == CostKind::newsvendor && fam.is_gaussian() &&
      inst.cost.smoothing == 0.0) {
    // The plug-in decision is theta + offset, so the v0-optimal theta is the
    // true fractile minus the oracle offset: an exact warm start.
    const Vec tau = inst.cost.fractiles();
    Vec ws(fam.param_dim());
    for (int i = 0; i < fam.param_dim(); ++i) {
      ws[i] = inst.truth.marginal(i).quantile(tau[i]) -
              std::sqrt(fam.cov()(i, i)) * norm_quantile(tau[i]);
    }
    starts.push_back(ws);
  }
  starts.push_back(theta_kl_point);
  const double scale = 0.5 * theta_kl_point.norm() + 0.5;
  const int q = fam.param_dim();
  if (q == 1) {
    starts.push_back(theta_kl_point + Vec::Constant(1, scale));
    starts.push_back(theta_kl_point - Vec::Constant(1, scale));
  } else {
    Vec ones = Vec::Ones(q) / std::sqrt(static_cast<double>(q));
    starts.push_back(theta_kl_point + scale * ones);
    starts.push_back(theta_kl_point - scale * ones);
  }

  // Work inside a marginally shrunken box: iterates clamped to the exact
  // boundary would make the finite-difference probes around them infeasible.
  // The margin exceeds every probe step, and the strict-interior acceptance
  // check below makes it irrelevant for any minimizer this code returns.
  Vec lo = fam.theta_lo();
  Vec hi = fam.theta_hi();
  for (int i = 0; i < q; ++i) {
    double edge = 1.0;
    if (std::isfinite(lo[i])) edge = std::max(edge, std::fabs(lo[i]));
    if (std::isfinite(hi[i])) edge = std::max(edge, std::fabs(hi[i]));
    double margin = 1e-3 * edge;
    const double width = hi[i] - lo[i];
    if (std::isfinite(width)) margin = std::min(margin, 0.25 * width);
    if (std::isfinite(lo[i])) lo[i] += margin;
    if (std::isfinite(hi[i])) hi[i] -= margin;
  }
  bool have_best = false;
  Vec best;
  double best_f = 0.0;
  for (const Vec& s0 : starts) {
    Vec th = s0.cwiseMax(lo).cwiseMin(hi);
    double fv = f(th);
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const Vec g = fd_gradient(f, th);
      if (g.lpNorm<Eigen::Infinity>() <= 5e-8 * std::max(1.0, std::fabs(fv))) {
        converged = true;
        break;
      }
      const Mat h = fd_hessian(f, th);
      Vec step;
      double ridge = 0.0;
      while (true) {
        try {
          Mat hr = h;
          if (ridge > 0.0) hr += ridge * Mat::Identity(q, q);
          step = -solve_spd(hr, g);
          break;
        } catch (const ConditioningError&) {
          ridge = (ridge == 0.0) ? 1e-8 : 10.0 * ridge;
          if (ridge > 1e6) {
            step = -g;  // steepest descent as a last resort
            break;
          }
        }
      }
      double alpha = 1.0;
      const double slope = g.dot(step);
      bool moved = false;
      for (int ls = 0; ls < 50; ++ls) {
        const Vec cand = (th + alpha * step).cwiseMax(lo).cwiseMin(hi);
        const double fc = f(cand);
        if (fc <= fv + 1e-4 * alpha * slope) {
          th = cand;
          fv = fc;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (converged && (!have_best || fv < best_f - 1e-14)) {
      have_best = true;
      best = th;
      best_f = fv;
    }
  }
  if (!have_best) {
    throw SolverError("theta_star: no multistart run reached stationarity");
  }
  if (!fam.theta_interior(best)) {
    throw SolverError("theta_star: minimizer sits on the parameter boundary");
  }
  return best;
}

Mat hess_v0_of_omega_theta(const Instance& inst, const TrueDistribution& dist,
                           const Vec& theta, double* l1_hat) {
  inst.validate();
  inst.family->validate_theta(theta);
  auto f = [&](const Vec& th) { return v0_of_theta(inst, dist, th); };
  const Mat center = fd_hessian(f, theta);
  if (l1_hat != nullptr) {
    // 3-point sweep per coordinate: difference quotients of the Hessian
    // itself.  One-sided quotients matter: at a stationary decision the
    // centered quotient alone can vanish by symmetry (third derivative zero
    // at the center) even though the Hessian moves over the window.
    const double delta = 0.1;
    double worst = 0.0;
    for (int i = 0; i < theta.size(); ++i) {
      Vec tp = theta, tm = theta;
      tp[i] += delta;
      tm[i] -= delta;
      const Mat hp = fd_hessian(f, tp);
      const Mat hm = fd_hessian(f, tm);
      worst = std::max({worst, op_norm_sym(hp - hm) / (2.0 * delta),
                        op_norm_sym(hp - center) / delta,
                        op_norm_sym(center - hm) / delta});
    }
    *l1_hat = worst;
  }
  return center;
}

AsymptoticSummary compute_summary(const Instance& inst) {
  inst.validate();
  const ParamFamily& fam = *inst.family;
  AsymptoticSummary s;
  s.q = fam.param_dim();
  s.family_kind = family_kind_name(fam.kind());
  s.true_kind = true_kind_name(inst.truth.kind());
  s.cost_kind = cost_kind_name(inst.cost.kind);

  // Identification points.
  s.theta_kl = theta_kl(inst.truth, fam);
  const TrueDistribution p_kl =
      TrueDistribution::in_family(inst.family, s.theta_kl);
  const Decision dec_kl =
      oracle_decision(inst.cost, fam, s.theta_kl, inst.oracle, inst.quad);
  s.omega_at_kl = dec_kl.omega;
  s.v0_at_kl = true_value(inst.cost, inst.truth, dec_kl.omega, inst.quad);

  const Decision opt = true_optimum(inst.cost, inst.truth, inst.oracle,
                                    inst.quad);
  s.omega_opt = opt.omega;
  s.v0_opt = opt.value;

  s.theta_star = theta_star(inst, s.theta_kl);
  const Decision dec_star =
      oracle_decision(inst.cost, fam, s.theta_star, inst.oracle, inst.quad);
  s.omega_at_star = dec_star.omega;
  s.v0_at_star = true_value(inst.cost, inst.truth, dec_star.omega, inst.quad);

  // Regret floors with the -1e-9 rounding clamp.
  auto clamp_floor = [](double v, const char* what) {
    if (v < kKappaFloor) {
      throw SolverError(std::string(what) +
                        " is negative beyond rounding tolerance: " +
                        std::to_string(v));
    }
    return v < 0.0 ? 0.0 : v;
  };
  s.kappa0_eto = clamp_floor(s.v0_at_kl - s.v0_opt, "kappa0_eto");
  s.kappa0_ieo = clamp_floor(s.v0_at_star - s.v0_opt, "kappa0_ieo");
  s.delta = clamp_floor(s.kappa0_eto - s.kappa0_ieo, "delta");

  // First- and second-order geometry of theta -> v0(omega_theta).
  auto f_true = [&](const Vec& th) {
    return v0_of_theta(inst, inst.truth, th);
  };
  s.grad_v0_at_kl = fd_gradient(f_true, s.theta_kl);
  s.hess_v0_at_kl =
      hess_v0_of_omega_theta(inst, inst.truth, s.theta_kl, &s.l1_hat_at_kl);
  s.hess_v0_at_star =
      hess_v0_of_omega_theta(inst, inst.truth, s.theta_star, &s.l1_hat_at_star);
  s.hess_v0_tilde =
      hess_v0_of_omega_theta(inst, p_kl, s.theta_kl, nullptr);

  // ETO sandwich.
  s.h_log = mean_log_density_hessian(inst.truth, fam, s.theta_kl);
  s.v_score = score_variance(inst.truth, fam, s.theta_kl);
  s.m1_eto = sandwich_sqrt_negdef(s.h_log, s.v_score);
  s.grad_v0_kl_norm = (s.m1_eto * s.grad_v0_at_kl).norm();

  // IEO sandwich at theta*.
  const Mat j_star =
      oracle_jacobian(inst.cost, fam, s.theta_star, inst.oracle, inst.quad);
  const MomentPair mom_star =
      grad_cost_moments(inst.cost, inst.truth, s.omega_at_star, inst.quad);
  s.var_grad_c = symmetrize(j_star.transpose() * mom_star.cov * j_star);
  s.m1_ieo = sandwich_sqrt_posdef(s.hess_v0_at_star, s.var_grad_c);

  // Tilde variants: moments under P^KL at the KL point.
  s.h_log_tilde = mean_log_density_hessian(p_kl, fam, s.theta_kl);
  s.v_score_tilde = score_variance(p_kl, fam, s.theta_kl);
  s.m1_eto_tilde = sandwich_sqrt_negdef(s.h_log_tilde, s.v_score_tilde);
  const Mat j_kl =
      oracle_jacobian(inst.cost, fam, s.theta_kl, inst.oracle, inst.quad);
  const MomentPair mom_kl =
      grad_cost_moments(inst.cost, p_kl, s.omega_at_kl, inst.quad);
  s.var_grad_c_tilde = symmetrize(j_kl.transpose() * mom_kl.cov * j_kl);
  s.m1_ieo_tilde = sandwich_sqrt_posdef(s.hess_v0_tilde, s.var_grad_c_tilde);

  // Second-order spectra.
  {
    const Mat a_eto =
        symmetrize(0.5 * s.m1_eto * s.hess_v0_at_kl * s.m1_eto);
    std::vector<double> ev = spectrum_descending(a_eto);
    s.eto_signed = !ev.empty() && ev.back() < -1e-8;
    if (!s.eto_signed) {
      for (double& w : ev) w = std::max(w, 0.0);
    }
    s.lambda_eto = ev;

    const Mat a_ieo =
        symmetrize(0.5 * s.m1_ieo * s.hess_v0_at_star * s.m1_ieo);
    std::vector<double> evi = spectrum_descending(a_ieo);
    if (!evi.empty() && evi.back() < -1e-8) {
      throw ConditioningError(
          "second-order IEO limit has a negative eigenvalue: the decision "
          "curvature at theta* is not PSD");
    }
    for (double& w : evi) w = std::max(w, 0.0);
    s.lambda_ieo = evi;
  }

  // tau spectrum.
  {
    const Mat diff = symmetrize(s.m1_ieo * s.hess_v0_at_star * s.m1_ieo -
                                s.m1_eto * s.hess_v0_at_kl * s.m1_eto);
    const Vec ev = sym_eigs(diff);
    s.tau1 = ev.minCoeff();
    s.tau2 = ev.maxCoeff();
    const Mat diff_tilde =
        symmetrize(s.m1_ieo_tilde * s.hess_v0_at_star * s.m1_ieo_tilde -
                   s.m1_eto_tilde * s.hess_v0_at_star * s.m1_eto_tilde);
    s.tau3 = min_eig_sym(diff_tilde);
    const Mat diff_tilde_kl =
        symmetrize(s.m1_ieo_tilde * s.hess_v0_tilde * s.m1_ieo_tilde -
                   s.m1_eto_tilde * s.hess_v0_tilde * s.m1_eto_tilde);
    s.tau3_kl_variant = min_eig_sym(diff_tilde_kl);
    s.tau6 = max_eig_sym(symmetrize(s.m1_eto * s.hess_v0_at_kl * s.m1_eto));
  }

  // Misspecification measure: five operator-norm gaps, true law vs P^KL.
  s.b0_gaps[0] = op_norm_sym(s.h_log - s.h_log_tilde);
  s.b0_gaps[1] = op_norm_sym(s.v_score - s.v_score_tilde);
  s.b0_gaps[2] = op_norm_sym(s.hess_v0_at_star - s.hess_v0_tilde);
  s.b0_gaps[3] = op_norm_sym(s.var_grad_c - s.var_grad_c_tilde);
  s.b0_gaps[4] = op_norm_sym(s.hess_v0_at_star - s.hess_v0_at_kl);
  s.b0 = *std::max_element(s.b0_gaps.begin(), s.b0_gaps.end());

  return s;
}

std::pair<ChiSqMixture, ChiSqMixture> second_order_limits(
    const AsymptoticSummary& s) {
  ChiSqMixture eto{s.lambda_eto, s.eto_signed};
  ChiSqMixture ieo{s.lambda_ieo, false};
  eto.validate();
  ieo.validate();
  return {eto, ieo};
}

ChiSqMixture limit_eto(const AsymptoticSummary& s) {
  return second_order_limits(s).first;
}

ChiSqMixture limit_ieo(const AsymptoticSummary& s) {
  return second_order_limits(s).second;
}

MixtureTail::MixtureTail(const ChiSqMixture& mix) {
  mix.validate();
  RngStream rng(kMixtureSeed, 0);
  draws_.resize(kMixtureDraws);
  const std::size_t q = mix.weights.size();
  for (int i = 0; i < kMixtureDraws; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      const double z = rng.next_normal();
      acc += mix.weights[j] * z * z;
    }
    draws_[static_cast<std::size_t>(i)] = acc;
  }
  std::sort(draws_.begin(), draws_.end());
}

double MixtureTail::tail(double t) const {
  const auto it = std::lower_bound(draws_.begin(), draws_.end(), t);
  return static_cast<double>(draws_.end() - it) /
         static_cast<double>(draws_.size());
}

double MixtureTail::std_error(double t) const {
  const double p = tail(t);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(draws_.size()));
}

double MixtureTail::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("MixtureTail::quantile: p must lie in (0,1)");
  }
  double lo = draws_.front() - 1e-9;
  double hi = draws_.back() + 1e-9;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::shared_ptr<const MixtureTail> MixtureTail::get(const ChiSqMixture& mix) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<double>, bool>,
                  std::shared_ptr<const MixtureTail>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{mix.weights, mix.signed_mixture}];
  if (!slot) slot = std::make_shared<const MixtureTail>(mix);
  return slot;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    worst = std::max({worst, hi, lo});
  }
  return worst;
}

BoundValue lower_bound_tail_diff(const AsymptoticSummary& s,
                                 double grad_v0_kl_norm, double n, double t,
                                 const LowerBudget& budget) {
  if (n < 1.0) throw DomainError("lower_bound_tail_diff: n must be >= 1");
  BoundValue out;
  if (t <= s.kappa0_ieo) {
    out.value = 0.0;
    out.case_tag = "case1-zero";
    return out;
  }
  const double sdev = grad_v0_kl_norm;
  double c;
  if (std::fabs(t - s.kappa0_eto) <= 1e-12 * std::max(1.0, s.kappa0_eto)) {
    c = 0.5;
    out.case_tag = "case2-at-kappa-eto";
  } else if (t < s.kappa0_eto) {
    if (sdev <= 0.0) {
      // Degenerate first-order term: the ETO regret concentrates at kappa,
      // so the crossing probability is 1 below kappa_eto.
      c = 1.0;
    } else {
      const double gap = s.kappa0_eto - t;
      c = 1.0 - std::exp(-n * gap * gap / (2.0 * sdev * sdev));
    }
    out.case_tag = "case2-interior";
  } else {
    c = 0.0;
    out.case_tag = "case2-beyond-kappa-eto";
  }
  out.value = c - budget.g_eto - budget.g_ieo;
  return out;
}

BoundValue upper_bound_tail_diff(const AsymptoticSummary& s, double n,
                                 double t, double epsilon,
                                 double error_budget) {
  if (n < 1.0) throw DomainError("upper_bound_tail_diff: n must be >= 1");
  if (s.tau1 < 0.0) {
    throw PreconditionError(
        "upper bound requires tau1 >= 0; this instance has tau1 = " +
        std::to_string(s.tau1));
  }
  if (s.tau6 <= 0.0) {
    throw PreconditionError("upper bound requires tau6 > 0");
  }
  BoundValue out;
  if (t <= s.kappa0_ieo) {
    out.value = 0.0;
    out.case_tag = "case1-zero";
    return out;
  }
  const auto tail_ref = MixtureTail::get(limit_ieo(s));
  const double tt = n * (t - s.kappa0_ieo);
  if (s.delta <= kDeltaZeroTol) {
    const double upper = (1.0 + s.tau1 / s.tau6) * tt;
    const double window =
        std::max(0.0, tail_ref->tail(tt) - tail_ref->tail(upper));
    out.value = -window + error_budget;
    out.case_tag = "case2-delta-zero";
    return out;
  }
  if (s.tau1 <= 0.0) {
    throw PreconditionError(
        "upper bound with delta > 0 requires tau1 > 0 to cover any region");
  }
  const double region_edge =
      s.kappa0_ieo + (s.tau6 + s.tau1) / s.tau1 * s.delta;
  if (t <= region_edge) {
    throw RegionError(
        "t lies in the intermediate region (kappa_ieo, kappa_ieo + "
        "((tau6+tau1)/tau1) delta] where the tail difference has no "
        "universal ordering");
  }
  const double eps_limit =
      s.tau1 / (s.tau1 + s.tau6) * (t - s.kappa0_ieo) - s.delta;
  double eps = epsilon;
  if (eps <= 0.0) {
    eps = 0.5 * eps_limit;  // midpoint of the admissible interval
  } else if (eps >= eps_limit) {
    throw PreconditionError(
        "epsilon must lie in (0, (tau1/(tau1+tau6))(t - kappa_ieo) - delta) "
        "= (0, " +
        std::to_string(eps_limit) + ")");
  }
  const double upper =
      (1.0 + s.tau1 / s.tau6) * (tt - n * s.delta - n * eps);
  const double window =
      std::max(0.0, tail_ref->tail(tt) - tail_ref->tail(upper));
  const double sdev = s.grad_v0_kl_norm;
  const double en =
      sdev > 0.0 ? std::exp(-n * eps * eps / (2.0 * sdev * sdev)) : 0.0;
  out.value = -window + en + error_budget;
  out.case_tag = "case2-misspecified";
  out.epsilon_used = eps;
  return out;
}

double generalization_bound(const GenBoundInputs& in) {
  if (in.lip <= 0.0 || in.curvature <= 0.0 || in.bound <= 0.0 ||
      in.d_theta <= 0.0 || in.e_theta <= 0.0 || in.c_abs <= 0.0) {
    throw DomainError("generalization_bound: all constants must be > 0");
  }
  if (in.q < 1 || in.n < 1.0) {
    throw DomainError("generalization_bound: need q >= 1 and n >= 1");
  }
  if (!(in.confidence > 0.0) || !(in.confidence < 1.0)) {
    throw DomainError("generalization_bound: confidence must lie in (0,1)");
  }
  const double rate_term = 4.0 * std::sqrt(2.0) * in.lip * in.lip * in.c_abs *
                           in.d_theta * in.e_theta / in.curvature *
                           std::sqrt(static_cast<double>(in.q) / in.n);
  const double conf_term =
      2.0 * in.bound * std::sqrt(std::log(2.0 / in.confidence) / (2.0 * in.n));
  return rate_term + conf_term;
}

GaussianTailBounds gaussian_tail_bounds(const Mat& m, const Vec& v, double t,
                                        double s1, double s2) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DomainError("gaussian_tail_bounds: M must be square");
  }
  if (v.size() != m.rows()) {
    throw DomainError("gaussian_tail_bounds: v dimension mismatch");
  }
  if (t < 0.0) throw DomainError("gaussian_tail_bounds: t must be >= 0");
  if (s1 > s2) throw DomainError("gaussian_tail_bounds: need s1 <= s2");
  const double q = static_cast<double>(m.rows());
  const double mnorm = op_norm_sym(m);
  const double mv = (m * v).norm();
  GaussianTailBounds out;
  out.norm_tail = 2.0 * q * std::exp(-t * t / (2.0 * q * mnorm * mnorm));
  out.linear_tail = std::exp(-t * t / (2.0 * mv * mv));
  out.interval_mass = (s2 - s1) / (std::sqrt(2.0 * M_PI) * mv * mv);
  return out;
}

DominanceReport dominance_tests(std::vector<double> a, std::vector<double> b,
                                double tol) {
  if (a.empty() || b.empty()) {
    throw DomainError("dominance_tests: both samples must be nonempty");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> grid;
  grid.reserve(a.size() + b.size());
  grid.insert(grid.end(), a.begin(), a.end());
  grid.insert(grid.end(), b.begin(), b.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  auto ecdf = [](const std::vector<double>& s, double x) {
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) -
                               s.begin()) /
           static_cast<double>(s.size());
  };

  // Suffix sums for the integrated upper tails E(x - s)^+.
  std::vector<double> suf_a(a.size() + 1, 0.0), suf_b(b.size() + 1, 0.0);
  for (std::size_t i = a.size(); i-- > 0;) suf_a[i] = suf_a[i + 1] + a[i];
  for (std::size_t i = b.size(); i-- > 0;) suf_b[i] = suf_b[i + 1] + b[i];
  auto upper_part = [](const std::vector<double>& s,
                       const std::vector<double>& suf, double x) {
    const std::size_t i0 = static_cast<std::size_t>(
        std::upper_bound(s.begin(), s.end(), x) - s.begin());
    const double cnt = static_cast<double>(s.size() - i0);
    return (suf[i0] - cnt * x) / static_cast<double>(s.size());
  };

  DominanceReport rep;
  rep.tol = tol;
  double v1 = 0.0, v2 = 0.0;
  // "a dominated by b" first order: F_a >= F_b everywhere.
  for (double x : grid) {
    v1 = std::max(v1, ecdf(b, x) - ecdf(a, x));
    v2 = std::max(v2, upper_part(a, suf_a, x) - upper_part(b, suf_b, x));
  }
  // As x -> -inf the integrated-tail difference tends to mean(a) - mean(b).
  v2 = std::max(v2, (suf_a[0] / na) - (suf_b[0] / nb));
  rep.first_violation = v1;
  rep.second_violation = v2;
  rep.first_ok = v1 <= tol;
  rep.second_ok = v2 <= tol;
  return rep;
}

double b0_measure(const Instance& inst) { return compute_summary(inst).b0; }

}  // namespace regret

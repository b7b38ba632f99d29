#include "regret/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

namespace {

void validate_data(const Instance& inst, const Mat& data) {
  if (data.rows() < 1) throw DomainError("fit: dataset is empty");
  if (data.cols() != inst.family->data_dim()) {
    throw DomainError("fit: data dimension does not match the family");
  }
}

Vec mle_theta(const Instance& inst, const Mat& data) {
  const ParamFamily& fam = *inst.family;
  if (fam.is_gaussian()) {
    Vec theta = data.colwise().mean().transpose();
    fam.validate_theta(theta);
    return theta;
  }
  Vec counts = Vec::Zero(fam.param_dim());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    counts[fam.atom_index(data.row(i).transpose())] += 1.0;
  }
  return counts / static_cast<double>(data.rows());
}

double average_nll(const Instance& inst, const Mat& data, const Vec& theta) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    acc -= inst.family->log_density(theta, data.row(i).transpose());
  }
  return acc / static_cast<double>(data.rows());
}

/// Deterministic multistart points: the MLE plus 4 perturbations at scale
/// 0.5 ||theta_mle|| + 0.5 in fixed directions.
std::vector<Vec> ieo_starts(const Vec& theta_mle) {
  const int q = static_cast<int>(theta_mle.size());
  const double scale = 0.5 * theta_mle.norm() + 0.5;
  std::vector<Vec> starts;
  starts.push_back(theta_mle);
  if (q == 1) {
    for (double f : {1.0, -1.0, 2.0, -2.0}) {
      starts.push_back(theta_mle + Vec::Constant(1, f * scale));
    }
    return starts;
  }
  Vec ones = Vec::Ones(q) / std::sqrt(static_cast<double>(q));
  Vec alt(q);
  for (int i = 0; i < q; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  alt /= alt.norm();
  for (const Vec& dir : {ones, alt}) {
    starts.push_back(theta_mle + scale * dir);
    starts.push_back(theta_mle - scale * dir);
  }
  return starts;
}

struct SmoothFitState {
  const Instance& inst;
  const TrueDistribution& emp;

  double loss(const Vec& theta, Vec* grad) const {
    const Decision dec = oracle_decision(inst.cost, *inst.family, theta,
                                         inst.oracle, inst.quad);
    const CostDerivs d =
        expected_cost_derivs(inst.cost, emp, dec.omega, inst.quad);
    if (grad != nullptr) {
      const Mat j = oracle_jacobian(inst.cost, *inst.family, theta,
                                    inst.oracle, inst.quad);
      *grad = j.transpose() * d.grad;
    }
    return d.value;
  }
};

struct BfgsOutcome {
  Vec theta;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
};

BfgsOutcome bfgs_minimize(const SmoothFitState& state, Vec theta,
                          const Vec& lo, const Vec& hi) {
  const int q = static_cast<int>(theta.size());
  theta = theta.cwiseMax(lo).cwiseMin(hi);
  Mat inv_h = Mat::Identity(q, q);
  Vec grad;
  double f = state.loss(theta, &grad);
  BfgsOutcome out;
  const int max_iter = 200;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    const double tol = 1e-8 * std::max(1.0, std::fabs(f));
    if (grad.lpNorm<Eigen::Infinity>() <= tol) {
      out.converged = true;
      break;
    }
    Vec dir = -(inv_h * grad);
    if (dir.dot(grad) >= 0.0) {  // safeguard: fall back to steepest descent
      dir = -grad;
      inv_h = Mat::Identity(q, q);
    }
    double alpha = 1.0;
    const double slope = grad.dot(dir);
    bool moved = false;
    Vec theta_new;
    double f_new = f;
    for (int ls = 0; ls < 50; ++ls) {
      theta_new = (theta + alpha * dir).cwiseMax(lo).cwiseMin(hi);
      f_new = state.loss(theta_new, nullptr);
      if (f_new <= f + 1e-4 * alpha * slope) {
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
    Vec grad_new;
    state.loss(theta_new, &grad_new);
    const Vec s = theta_new - theta;
    const Vec y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      const Vec hy = inv_h * y;
      const double yhy = y.dot(hy);
      inv_h += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
               (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    theta = theta_new;
    f = f_new;
    grad = grad_new;
  }
  out.theta = theta;
  out.objective = f;
  if (!out.converged) {
    // Final check at the resting point.
    Vec g;
    state.loss(theta, &g);
    out.converged =
        g.lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, std::fabs(f));
  }
  return out;
}

}  // namespace

std::uint64_t dataset_hash(const Mat& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int64_t dims[2] = {static_cast<std::int64_t>(data.rows()),
                                static_cast<std::int64_t>(data.cols())};
  h = fnv1a64(dims, sizeof(dims), h);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      const double v = data(i, j);
      h = fnv1a64(&v, sizeof(v), h);
    }
  }
  return h;
}

FitResult fit_eto(const Instance& inst, const Mat& data,
                  std::uint64_t stream_index) {
  inst.validate();
  validate_data(inst, data);
  FitResult out;
  out.theta_hat = mle_theta(inst, data);
  out.objective = average_nll(inst, data, out.theta_hat);
  out.omega_hat = oracle_decision(inst.cost, *inst.family, out.theta_hat,
                                  inst.oracle, inst.quad)
                      .omega;
  out.n = static_cast<int>(data.rows());
  out.data_hash = dataset_hash(data);
  out.stream_index = stream_index;
  out.converged = true;
  out.iterations = 0;
  out.method = "mle";
  return out;
}

FitResult fit_ieo(const Instance& inst, const Mat& data,
                  std::uint64_t stream_index) {
  inst.validate();
  validate_data(inst, data);
  const ParamFamily& fam = *inst.family;
  FitResult out;
  out.n = static_cast<int>(data.rows());
  out.data_hash = dataset_hash(data);
  out.stream_index = stream_index;

  const Vec theta_mle = mle_theta(inst, data);

  if (inst.cost.kind == CostKind::newsvendor && inst.cost.smoothing == 0.0 &&
      fam.is_gaussian()) {
    // The empirical objective in omega_i is piecewise linear with the
    // b/(b+h) sample fractile as minimizer; translate back by the oracle
    // offset.  When n*tau is an integer the minimizing set is the interval
    // between consecutive order statistics and the tie is broken by
    // clamping the MLE into it (deterministic, and asymptotically the
    // efficient choice among minimizers).
    const int n = out.n;
    const Vec tau = inst.cost.fractiles();
    Vec theta(fam.param_dim());
    for (int i = 0; i < fam.param_dim(); ++i) {
      const double offset =
          std::sqrt(fam.cov()(i, i)) * norm_quantile(tau[i]);
      std::vector<double> col(data.col(i).data(),
                              data.col(i).data() + data.rows());
      std::sort(col.begin(), col.end());
      const double ntau = n * tau[i];
      const double rounded = std::round(ntau);
      if (std::fabs(ntau - rounded) < 1e-9 && rounded >= 1.0 &&
          rounded < static_cast<double>(n)) {
        const int k = static_cast<int>(rounded);
        const double lo = col[static_cast<std::size_t>(k - 1)] - offset;
        const double hi = col[static_cast<std::size_t>(k)] - offset;
        theta[i] = std::clamp(theta_mle[i], lo, hi);
      } else {
        const int k = static_cast<int>(std::ceil(ntau));
        theta[i] = col[static_cast<std::size_t>(std::clamp(k, 1, n) - 1)] -
                   offset;
      }
    }
    out.theta_hat = theta;
    out.method = "ieo-fractile";
    out.converged = true;
    out.iterations = 0;
  } else {
    if (!fam.is_gaussian()) {
      throw NotImplementedError(
          "fit_ieo: direct decision fitting over the probability simplex is "
          "not supported; use a gaussian family");
    }
    const TrueDistribution emp = TrueDistribution::empirical(data);
    const SmoothFitState state{inst, emp};
    const std::vector<Vec> starts = ieo_starts(theta_mle);
    BfgsOutcome best;
    bool have_best = false;
    int total_iters = 0;
    for (const Vec& s0 : starts) {
      const BfgsOutcome res =
          bfgs_minimize(state, s0, fam.theta_lo(), fam.theta_hi());
      total_iters += res.iterations;
      // Lexicographic selection: better objective wins; the earlier start
      // (the MLE first) wins ties, keeping the pick deterministic.
      if (!have_best || res.objective < best.objective - 1e-12) {
        best = res;
        have_best = true;
      }
    }
    out.theta_hat = best.theta;
    out.method = "ieo-bfgs";
    out.converged = best.converged;
    out.iterations = total_iters;
  }

  out.objective = empirical_ieo_loss(inst, data, out.theta_hat);
  out.omega_hat = oracle_decision(inst.cost, *inst.family, out.theta_hat,
                                  inst.oracle, inst.quad)
                      .omega;
  return out;
}

double empirical_ieo_loss(const Instance& inst, const Mat& data,
                          const Vec& theta) {
  inst.validate();
  validate_data(inst, data);
  const Decision dec =
      oracle_decision(inst.cost, *inst.family, theta, inst.oracle, inst.quad);
  const TrueDistribution emp = TrueDistribution::empirical(data);
  return expected_cost(inst.cost, emp, dec.omega, inst.quad);
}

}  // namespace regret

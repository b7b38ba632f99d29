#include "regret/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "regret/errors.hpp"

namespace regret {

namespace {
constexpr double kRegretFloor = -1e-8;

double guarded_value(const CostModel& m, const TrueDistribution& p,
                     const Vec& omega, const QuadSpec& spec) {
  try {
    return expected_cost(m, p, omega, spec);
  } catch (const SolverError&) {
    return std::numeric_limits<double>::infinity();
  }
}

void check_interior(const Vec& omega, const Vec& lo, const Vec& hi,
                    double margin) {
  for (int i = 0; i < omega.size(); ++i) {
    if (omega[i] <= lo[i] + margin || omega[i] >= hi[i] - margin) {
      throw SolverError(
          "decision optimum is on the boundary of the decision box at "
          "coordinate " +
          std::to_string(i) + " (value " + std::to_string(omega[i]) + ")");
    }
  }
}

Decision newton_minimize(const CostModel& m, const TrueDistribution& dist,
                         const OracleOptions& opts, const QuadSpec& spec,
                         Vec omega) {
  const Vec lo = opts.lo_or_default(m.dim);
  const Vec hi = opts.hi_or_default(m.dim);
  omega = omega.cwiseMax(lo).cwiseMin(hi);
  CostDerivs d = expected_cost_derivs(m, dist, omega, spec);
  Decision out;
  for (int it = 0; it < opts.max_iter; ++it) {
    out.iterations = it;
    if (d.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      out.omega = omega;
      out.value = d.value;
      out.residual = d.grad.lpNorm<Eigen::Infinity>();
      check_interior(omega, lo, hi, opts.interior_margin);
      return out;
    }
    // Newton direction with escalating ridge when the Hessian is not SPD.
    Vec step;
    double ridge = 0.0;
    while (true) {
      try {
        Mat h = d.hess;
        if (ridge > 0.0) h += ridge * Mat::Identity(m.dim, m.dim);
        step = -solve_spd(h, d.grad);
        break;
      } catch (const ConditioningError&) {
        ridge = (ridge == 0.0) ? 1e-8 : ridge * 10.0;
        if (ridge > 1e6) {
          throw SolverError("newton_minimize: Hessian unusable even with ridge");
        }
      }
    }
    // Armijo backtracking on the expected cost.
    const double slope = d.grad.dot(step);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Vec cand = (omega + alpha * step).cwiseMax(lo).cwiseMin(hi);
      const double f_cand = guarded_value(m, dist, cand, spec);
      if (f_cand <= d.value + opts.armijo_c * alpha * slope) {
        omega = cand;
        d = expected_cost_derivs(m, dist, omega, spec);
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      throw SolverError(
          "newton_minimize: line search stalled at gradient norm " +
          std::to_string(d.grad.lpNorm<Eigen::Infinity>()));
    }
  }
  if (d.grad.lpNorm<Eigen::Infinity>() <= opts.grad_tol * 100.0) {
    // Accept a slightly loose stationarity rather than fail outright.
    out.omega = omega;
    out.value = d.value;
    out.residual = d.grad.lpNorm<Eigen::Infinity>();
    check_interior(omega, lo, hi, opts.interior_margin);
    return out;
  }
  throw SolverError("newton_minimize: no convergence within iteration budget");
}

}  // namespace

Vec OracleOptions::lo_or_default(int dim) const {
  if (omega_lo.size() == dim) return omega_lo;
  if (omega_lo.size() != 0) throw DomainError("omega_lo has wrong dimension");
  return Vec::Constant(dim, -10.0);
}

Vec OracleOptions::hi_or_default(int dim) const {
  if (omega_hi.size() == dim) return omega_hi;
  if (omega_hi.size() != 0) throw DomainError("omega_hi has wrong dimension");
  return Vec::Constant(dim, 10.0);
}

Decision solve_decision(const CostModel& m, const TrueDistribution& dist,
                        const OracleOptions& opts, const QuadSpec& spec,
                        const Vec* start) {
  m.validate();
  if (dist.dim() != m.dim) {
    throw DomainError("solve_decision: dimension mismatch");
  }
  if (m.kind == CostKind::newsvendor && m.smoothing == 0.0) {
    // Fractile rule: omega_i is the b/(b+h) quantile of the i-th marginal.
    const Vec tau = m.fractiles();
    Vec omega(m.dim);
    for (int i = 0; i < m.dim; ++i) {
      omega[i] = dist.marginal(i).quantile(tau[i]);
    }
    Decision out;
    out.omega = omega;
    out.value = expected_cost(m, dist, omega, spec);
    out.closed_form = true;
    check_interior(omega, opts.lo_or_default(m.dim), opts.hi_or_default(m.dim),
                   opts.interior_margin);
    return out;
  }
  Vec omega0;
  if (start != nullptr) {
    omega0 = *start;
  } else if (m.kind == CostKind::newsvendor) {
    // Smoothed newsvendor: the exact fractile is an excellent warm start.
    const Vec tau = m.fractiles();
    omega0 = Vec(m.dim);
    for (int i = 0; i < m.dim; ++i) {
      omega0[i] = dist.marginal(i).quantile(tau[i]);
    }
  } else {
    omega0 = Vec::Zero(m.dim);
  }
  return newton_minimize(m, dist, opts, spec, omega0);
}

Decision oracle_decision(const CostModel& m, const ParamFamily& family,
                         const Vec& theta, const OracleOptions& opts,
                         const QuadSpec& spec) {
  const auto fam = std::make_shared<const ParamFamily>(family);
  const TrueDistribution p_theta = TrueDistribution::in_family(fam, theta);
  return solve_decision(m, p_theta, opts, spec);
}

Decision true_optimum(const CostModel& m, const TrueDistribution& p,
                      const OracleOptions& opts, const QuadSpec& spec) {
  return solve_decision(m, p, opts, spec);
}

double true_value(const CostModel& m, const TrueDistribution& p,
                  const Vec& omega, const QuadSpec& spec) {
  return expected_cost(m, p, omega, spec);
}

Mat oracle_jacobian(const CostModel& m, const ParamFamily& family,
                    const Vec& theta, const OracleOptions& opts,
                    const QuadSpec& spec) {
  family.validate_theta(theta);
  const int q = family.param_dim();
  if (m.kind == CostKind::newsvendor && family.is_gaussian()) {
    // Translation equivariance: omega_theta = theta + const, so J = I.
    return Mat::Identity(q, q);
  }
  const auto fam = std::make_shared<const ParamFamily>(family);
  const Decision dec =
      solve_decision(m, TrueDistribution::in_family(fam, theta), opts, spec);
  const Mat hess =
      expected_cost_derivs(m, TrueDistribution::in_family(fam, theta),
                           dec.omega, spec)
          .hess;
  Mat cross(m.dim, q);  // d/d theta_j of grad_omega E_{P_theta} c
  if (family.kind() == FamilyKind::finite_discrete) {
    // E_theta[grad c] = sum_k theta_k grad c(omega, z_k) is linear in theta.
    for (int j = 0; j < q; ++j) {
      cross.col(j) =
          cost_grad(m, dec.omega, family.support().row(j).transpose());
    }
  } else {
    for (int j = 0; j < q; ++j) {
      const double step = 1e-5 * std::max(1.0, std::fabs(theta[j]));
      Vec tp = theta, tm = theta;
      tp[j] += step;
      tm[j] -= step;
      const Vec gp =
          expected_cost_derivs(m, TrueDistribution::in_family(fam, tp),
                               dec.omega, spec)
              .grad;
      const Vec gm =
          expected_cost_derivs(m, TrueDistribution::in_family(fam, tm),
                               dec.omega, spec)
              .grad;
      cross.col(j) = (gp - gm) / (2.0 * step);
    }
  }
  return -solve_spd(hess, cross);
}

RegretEvaluator::RegretEvaluator(const CostModel& m, const TrueDistribution& p,
                                 const OracleOptions& opts,
                                 const QuadSpec& spec)
    : cost_(m), dist_(p), spec_(spec), opt_(true_optimum(m, p, opts, spec)) {}

double RegretEvaluator::regret(const Vec& omega, double* raw) const {
  const double r = true_value(cost_, dist_, omega, spec_) - opt_.value;
  if (raw != nullptr) *raw = r;
  if (r < kRegretFloor) {
    throw SolverError("regret below the -1e-8 floor: candidate decision beat "
                      "the solved optimum, value " + std::to_string(r));
  }
  return r < 0.0 ? 0.0 : r;
}

}  // namespace regret

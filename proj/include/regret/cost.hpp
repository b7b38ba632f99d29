#pragma once

#include <string>
#include <vector>

#include "regret/distribution.hpp"

namespace regret {

enum class CostKind { newsvendor, portfolio };

const char* cost_kind_name(CostKind k);
CostKind cost_kind_from_name(const std::string& name);

/// Per-sample decision cost c(omega, z).
///
/// newsvendor: sum_i h_i (omega_i - z_i)^+ + b_i (z_i - omega_i)^+, with an
/// optional smoothing s > 0 replacing x^+ by s log(1 + e^{x/s}).
/// portfolio: exp(-z' omega) + gamma ||omega||^2 (exponential utility with a
/// ridge making the objective strongly convex).
struct CostModel {
  CostKind kind = CostKind::newsvendor;
  int dim = 1;  ///< decision dimension p (= data dimension d here)
  Vec h, b;
  double smoothing = 0.0;
  double gamma = 0.0;
  // Optional user-declared constants for the generalization bound
  // (Lipschitz constant, strong-convexity modulus, absolute cost bound).
  // NaN means "not declared"; the portfolio curvature 2*gamma is analytic.
  double lip = std::numeric_limits<double>::quiet_NaN();
  double curvature = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();

  static CostModel newsvendor(const Vec& h, const Vec& b, double smoothing = 0.0);
  static CostModel portfolio(int dim, double gamma);

  void validate() const;
  /// Strong-convexity modulus rho of omega -> E c: analytic for portfolio,
  /// user-declared otherwise (DomainError when undeclared).
  double strong_convexity() const;
  /// Critical fractiles b_i / (b_i + h_i) (newsvendor only).
  Vec fractiles() const;
};

double cost_value(const CostModel& m, const Vec& omega, const Vec& z);

/// Gradient of c in omega.  For the exact newsvendor this is the a.e.
/// derivative h_i 1{z_i < omega_i} - b_i 1{z_i >= omega_i} (measure-zero
/// ties resolved toward the underage side).
Vec cost_grad(const CostModel& m, const Vec& omega, const Vec& z);

/// z-locations where z -> c(omega, z) or its derivatives kink for
/// coordinate `coord`: {omega_i} for the exact newsvendor, resolution hints
/// bracketing the softplus bend for the smoothed one, none for portfolio.
std::vector<double> cost_kinks(const CostModel& m, int coord, const Vec& omega);

/// Expected cost and its omega-derivatives under a distribution, computed by
/// closed forms where available (gaussian-mixture newsvendor partial
/// expectations, portfolio moment generating function, exact sums over
/// atoms) and kink-aware quadrature otherwise.
struct CostDerivs {
  double value = 0.0;
  Vec grad;
  Mat hess;
  bool quad_converged = true;
};

double expected_cost(const CostModel& m, const TrueDistribution& p,
                     const Vec& omega, const QuadSpec& spec);
CostDerivs expected_cost_derivs(const CostModel& m, const TrueDistribution& p,
                                const Vec& omega, const QuadSpec& spec);

/// Mean and covariance of the cost gradient grad_omega c(omega, z) under p.
struct MomentPair {
  Vec mean;
  Mat cov;
};
MomentPair grad_cost_moments(const CostModel& m, const TrueDistribution& p,
                             const Vec& omega, const QuadSpec& spec);

}  // namespace regret

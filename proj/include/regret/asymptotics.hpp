#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "regret/instance.hpp"

namespace regret {

/// Law of sum_i weights[i] * chi^2_1 with independent components.  The
/// weights are nonnegative except when `signed_mixture` is set, which happens
/// only for the first pipeline when the plug-in curvature fails to be PSD at
/// the KL point; tail evaluation then falls back to Monte Carlo over the
/// signed quadratic form (the same sampler, which never assumed a sign).
struct ChiSqMixture {
  std::vector<double> weights;
  bool signed_mixture = false;

  void validate() const;
};

/// Every population-level quantity of the theory layer for one instance.
struct AsymptoticSummary {
  int q = 0;  ///< parameter dimension

  // Identification points and regret floors.
  Vec theta_kl, theta_star;
  Vec omega_at_kl, omega_at_star, omega_opt;
  double v0_at_kl = 0.0, v0_at_star = 0.0, v0_opt = 0.0;
  double kappa0_eto = 0.0, kappa0_ieo = 0.0, delta = 0.0;

  // First-order geometry at the KL point.
  Vec grad_v0_at_kl;
  double grad_v0_kl_norm = 0.0;  ///< s = || M1_eto grad v0(omega_theta)|KL ||

  // Curvature of theta -> v0(omega_theta) and Hessian-Lipschitz estimates.
  Mat hess_v0_at_kl, hess_v0_at_star;
  double l1_hat_at_kl = 0.0, l1_hat_at_star = 0.0;

  // Sandwich ingredients and square roots (true-law versions).
  Mat h_log, v_score, m1_eto;
  Mat var_grad_c, m1_ieo;

  // Tilde versions: moments taken under P^KL at the KL point.
  Mat h_log_tilde, v_score_tilde, m1_eto_tilde;
  Mat hess_v0_tilde, var_grad_c_tilde, m1_ieo_tilde;

  // Eigenvalue spectra of the second-order limits (nonincreasing).
  std::vector<double> lambda_eto, lambda_ieo;
  bool eto_signed = false;

  // tau spectrum.
  double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0, tau3_kl_variant = 0.0,
         tau6 = 0.0;

  // Misspecification measure: max of the five operator-norm gaps
  // (log-likelihood Hessians, score variances, decision-cost Hessian vs its
  // P^KL analogue, cost-gradient variances, Hessians at theta* vs theta^KL).
  double b0 = 0.0;
  std::array<double, 5> b0_gaps{};

  std::string family_kind, true_kind, cost_kind;
};

/// KL projection argmax_theta E_P[log p_theta]; closed form for the
/// supported families, with the stationarity certificate checked.
Vec theta_kl(const TrueDistribution& p, const ParamFamily& family);

/// Decision-optimal parameter argmin_theta v0(omega_theta) by multistart
/// Newton on finite differences of the quadrature objective.
Vec theta_star(const Instance& inst, const Vec& theta_kl_point);

/// Central-difference Hessian of theta -> E_dist[c(omega_theta, z)] with the
/// pinned step max(1e-4, 1e-4 ||theta||).  `l1_hat`, when non-null, receives
/// a local Hessian-Lipschitz estimate from a 3-point sweep per coordinate.
Mat hess_v0_of_omega_theta(const Instance& inst, const TrueDistribution& dist,
                           const Vec& theta, double* l1_hat = nullptr);

/// Assemble the full summary.
AsymptoticSummary compute_summary(const Instance& inst);

/// Second-order limit laws (ETO then IEO) from the summary spectra.
std::pair<ChiSqMixture, ChiSqMixture> second_order_limits(
    const AsymptoticSummary& s);

/// Shorthand accessors for the two mixtures.
ChiSqMixture limit_eto(const AsymptoticSummary& s);
ChiSqMixture limit_ieo(const AsymptoticSummary& s);

/// Monte Carlo reference law of a chi-square mixture: 1e6 draws from a fixed
/// internal stream, held sorted.  Construction is memoized per weight
/// vector; all evaluation methods are const and thread safe.
class MixtureTail {
 public:
  explicit MixtureTail(const ChiSqMixture& mix);

  /// P(G >= t) with its Monte Carlo standard error.
  double tail(double t) const;
  double std_error(double t) const;
  double cdf(double x) const { return 1.0 - tail(x); }
  /// Quantile by bisection on the tail function.
  double quantile(double p) const;
  const std::vector<double>& sorted_draws() const { return draws_; }

  static std::shared_ptr<const MixtureTail> get(const ChiSqMixture& mix);

 private:
  std::vector<double> draws_;
};

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// User-declared statistical error budgets for the tail-difference bounds.
/// The analysis proves such terms exist but never pins their constants, so
/// they enter as explicit inputs and default to zero ("dominant term only").
struct LowerBudget {
  double g_eto = 0.0;
  double g_ieo = 0.0;
};

struct BoundValue {
  double value = 0.0;
  std::string case_tag;
  double epsilon_used = 0.0;
};

/// Lower bound on D(t) = P(R_eto >= t) - P(R_ieo >= t): 0 for t <= kappa_ieo,
/// otherwise the concentration constant C minus the declared budgets, with
/// C = 1 - exp(-n (kappa_eto - t)^2 / (2 s^2)) between the kappas, 1/2 at
/// t = kappa_eto, and 0 beyond.
BoundValue lower_bound_tail_diff(const AsymptoticSummary& s,
                                 double grad_v0_kl_norm, double n, double t,
                                 const LowerBudget& budget);

/// Upper bound on D(t) for t in the covered region.  Requires tau1 >= 0.
/// For delta > 0 the covered region is t > kappa_ieo + ((tau6+tau1)/tau1)
/// delta and a slack epsilon in (0, (tau1/(tau1+tau6))(t - kappa_ieo) -
/// delta) enters both the window and the exp(-n eps^2 / (2 s^2)) term;
/// epsilon <= 0 requests the midpoint of the valid interval.  For delta = 0
/// (below 1e-9) the epsilon machinery drops out.  Throws RegionError in the
/// uncovered intermediate region.
BoundValue upper_bound_tail_diff(const AsymptoticSummary& s, double n,
                                 double t, double epsilon,
                                 double error_budget);

/// Inputs of the finite-sample excess-regret slack.  `confidence` is the
/// tail probability (often written delta-tilde) entering log(2/confidence).
struct GenBoundInputs {
  double lip = 1.0;         ///< L_c
  double curvature = 1.0;   ///< rho_c
  double bound = 1.0;       ///< B_c
  double d_theta = 1.0;     ///< TV-Lipschitz constant of the family
  double e_theta = 1.0;     ///< parameter-set diameter factor
  double c_abs = 1.0;       ///< absolute constant (declared, not derived)
  int q = 1;
  double n = 1.0;
  double confidence = 0.5;
};

double generalization_bound(const GenBoundInputs& in);

/// The three displayed gaussian tail bounds for Y ~ N(0, I_q), M symmetric:
/// norm tail 2q exp(-t^2/(2q||M||^2)); linear tail exp(-t^2/(2||Mv||^2));
/// interval mass (s2-s1)/(sqrt(2 pi) ||Mv||^2), exactly as displayed (the
/// interval form is a valid bound only when ||Mv|| <= 1).
struct GaussianTailBounds {
  double norm_tail = 0.0;
  double linear_tail = 0.0;
  double interval_mass = 0.0;
};

GaussianTailBounds gaussian_tail_bounds(const Mat& m, const Vec& v, double t,
                                        double s1, double s2);

/// Empirical stochastic-dominance tests ("a dominated by b"): first order
/// compares CDFs on the merged support, second order compares the integrated
/// upper tails E(x - s)^+ (the nondecreasing-convex characterization).
struct DominanceReport {
  bool first_ok = false;
  double first_violation = 0.0;
  bool second_ok = false;
  double second_violation = 0.0;
  double tol = 0.0;
};

DominanceReport dominance_tests(std::vector<double> a, std::vector<double> b,
                                double tol = 0.01);

/// Misspecification measure alone (runs the full summary internally).
double b0_measure(const Instance& inst);

}  // namespace regret

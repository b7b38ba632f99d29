#pragma once

#include <optional>

#include "regret/cost.hpp"

namespace regret {

/// Controls for the decision solvers.
struct OracleOptions {
  Vec omega_lo, omega_hi;    ///< decision box (defaults to [-10, 10]^p)
  double grad_tol = 1e-10;   ///< stationarity target, infinity norm
  int max_iter = 200;
  double armijo_c = 1e-4;
  double interior_margin = 1e-6;  ///< minimum distance to the decision box

  Vec lo_or_default(int dim) const;
  Vec hi_or_default(int dim) const;
};

/// A solved decision with its optimality certificate.
struct Decision {
  Vec omega;
  double value = 0.0;        ///< expected cost at omega
  double residual = 0.0;     ///< stationarity gradient norm (0 closed form)
  int iterations = 0;
  bool closed_form = false;
};

/// Minimize omega -> E_dist[c(omega, z)] over the decision box.  Closed-form
/// fractile solution for the exact newsvendor with continuous marginals,
/// damped Newton with Armijo backtracking otherwise.  Throws SolverError on
/// non-convergence or a boundary optimum.
Decision solve_decision(const CostModel& m, const TrueDistribution& dist,
                        const OracleOptions& opts, const QuadSpec& spec,
                        const Vec* start = nullptr);

/// The oracle map theta -> omega_theta = argmin E_{P_theta} c.
Decision oracle_decision(const CostModel& m, const ParamFamily& family,
                         const Vec& theta, const OracleOptions& opts,
                         const QuadSpec& spec);

/// True optimum (omega*, v0(omega*)) under the data-generating law.
Decision true_optimum(const CostModel& m, const TrueDistribution& p,
                      const OracleOptions& opts, const QuadSpec& spec);

/// v0(omega) = E_P[c(omega, z)].
double true_value(const CostModel& m, const TrueDistribution& p,
                  const Vec& omega, const QuadSpec& spec);

/// Jacobian d omega_theta / d theta at theta via the implicit-function
/// theorem, J = -(hess_omega)^{-1} grad_{omega,theta}; identity for the
/// translation-equivariant newsvendor-gaussian pairing, central finite
/// differences of the analytic omega-gradient otherwise.
Mat oracle_jacobian(const CostModel& m, const ParamFamily& family,
                    const Vec& theta, const OracleOptions& opts,
                    const QuadSpec& spec);

/// Caches (omega*, v0*) and evaluates regrets R(omega) = v0(omega) - v0*.
/// Raw values below -1e-8 are a solver inconsistency; raw values in
/// [-1e-8, 0) are numerical dust and clamp to 0.
class RegretEvaluator {
 public:
  RegretEvaluator(const CostModel& m, const TrueDistribution& p,
                  const OracleOptions& opts, const QuadSpec& spec);

  const Decision& optimum() const { return opt_; }
  /// Clamped regret; `raw` (optional) receives the unclamped value.
  double regret(const Vec& omega, double* raw = nullptr) const;

 private:
  const CostModel& cost_;
  const TrueDistribution& dist_;
  QuadSpec spec_;
  Decision opt_;
};

}  // namespace regret

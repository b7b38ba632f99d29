#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regret/asymptotics.hpp"
#include "regret/instance.hpp"

namespace regret {

/// One replicated finite-sample experiment: for each n, M datasets, both
/// pipelines fit on each dataset (common random numbers), regrets recorded.
struct ExperimentConfig {
  Instance instance;
  std::vector<int> n_list{250, 1000, 4000};
  int replications = 2000;
  /// Thresholds in absolute regret units; empty selects the default rule
  /// [0, kappa0_eto + 5 q99(G_ieo)/n] with 101 points (grid then varies
  /// with n; the rule is recorded in each curve's metadata).
  std::vector<double> t_grid;
  std::uint64_t base_seed = 20240915;
  int threads = 1;
  bool keep_raw = false;
  double fail_frac_limit = 0.01;

  void validate() const;
};

/// Empirical tail curve of one pipeline at one sample size.
struct TailCurve {
  std::string method;  ///< "eto" or "ieo"
  int n = 0;
  std::vector<double> t_grid;
  std::vector<double> probs;         ///< P_hat(R >= t) per threshold
  std::vector<double> ci_halfwidth;  ///< 1.96 sqrt(p(1-p)/M_used)
  std::vector<double> raw_regrets;   ///< regrets of the used replications
  // Metadata.
  int replications_total = 0;
  int replications_used = 0;
  int failures = 0;
  std::uint64_t base_seed = 0;
  std::string t_grid_rule;  ///< "user" or a description of the default rule
  std::string crn_note = "common random numbers: both pipelines fit per-"
                         "replication on the same dataset";
  std::string first_failure;  ///< diagnostic from the first failed replication
};

struct CurvePair {
  TailCurve eto;
  TailCurve ieo;
};

/// Pointwise tail difference D(t) = P(R_eto >= t) - P(R_ieo >= t) of a CRN
/// pair, with half-widths combined in quadrature.
struct DiffCurve {
  int n = 0;
  std::vector<double> t_grid;
  std::vector<double> d;
  std::vector<double> ci_halfwidth;
  std::string crn_note;
};

/// Distributional convergence checks across the n sweep.
struct ScalingReport {
  std::vector<int> ns;
  /// KS of n (R_ieo - kappa0_ieo) against the G_ieo mixture law, per n.
  std::vector<double> ks_ieo;
  bool ks_ieo_decreasing = false;
  /// KS of sqrt(n) (R_eto - kappa0_eto) against N(0, s^2), per n; empty when
  /// the first-order term degenerates (s = 0), with the reason recorded.
  std::vector<double> ks_eto;
  bool eto_check_skipped = false;
  std::string eto_skip_reason;
  /// Median absolute deviations |R - kappa0| per n and their log-log slopes
  /// (|.| keeps the ETO median positive: R_eto - kappa0_eto is centered near
  /// zero at first order, so its plain median can cross zero).
  std::vector<double> median_ieo, median_eto;
  double slope_ieo = 0.0;
  double slope_eto = 0.0;
  std::string note;
};

/// Run the full experiment: one CRN curve pair per n, deterministic for a
/// fixed base seed regardless of thread count.  `summary` feeds the default
/// t-grid rule; pass nullptr to have it computed on demand (only when the
/// grid is actually defaulted).
std::vector<CurvePair> run_experiment(const ExperimentConfig& config,
                                      const AsymptoticSummary* summary);

DiffCurve diff_curve(const TailCurve& eto, const TailCurve& ieo);

/// Requires curves at >= 3 sample sizes.
ScalingReport scaling_check(const std::vector<CurvePair>& curves,
                            const AsymptoticSummary& summary);

/// Ordinary least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace regret

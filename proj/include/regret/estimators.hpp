#pragma once

#include <cstdint>
#include <string>

#include "regret/instance.hpp"

namespace regret {

/// Output of one estimation pipeline on one dataset.
struct FitResult {
  Vec theta_hat;
  Vec omega_hat;          ///< oracle_decision(theta_hat)
  double objective = 0.0; ///< pipeline objective at theta_hat (see methods)
  int n = 0;
  std::uint64_t data_hash = 0;   ///< FNV-1a of the raw data bytes
  std::uint64_t stream_index = 0;
  bool converged = true;
  int iterations = 0;
  std::string method;
};

/// FNV-1a hash of a dataset (shape plus raw doubles, row-major).
std::uint64_t dataset_hash(const Mat& data);

/// Estimate-then-optimize: maximum likelihood for theta (closed form for the
/// supported families), then the plug-in decision.  `objective` is the
/// average negative log-likelihood at theta_hat.
FitResult fit_eto(const Instance& inst, const Mat& data,
                  std::uint64_t stream_index);

/// Integrated estimation-optimization: minimize the empirical decision cost
/// of omega_theta.  Exact order-statistic solution for the unsmoothed
/// newsvendor with gaussian families (ties resolved by clamping the MLE into
/// the minimizing interval); otherwise multistart BFGS on the smooth
/// empirical objective, gradients assembled through the oracle Jacobian.
/// `objective` is the empirical decision cost at theta_hat.
FitResult fit_ieo(const Instance& inst, const Mat& data,
                  std::uint64_t stream_index);

/// Empirical IEO objective (1/n) sum_i c(omega_theta, z_i) at a given theta.
double empirical_ieo_loss(const Instance& inst, const Mat& data,
                          const Vec& theta);

}  // namespace regret

#pragma once

#include <memory>

#include "regret/linalg.hpp"
#include "regret/rng.hpp"

namespace regret {

/// Supported parametric families.
///
/// gaussian_location and gaussian_full_mean are both N(theta, Sigma) with
/// Sigma fixed; they share every formula.  The distinction is semantic: a
/// location family is translation equivariant, which the theory layer uses
/// (the plug-in decision sweeps all quantile decisions, so the IEO regret
/// floor vanishes), while gaussian_full_mean makes no such promise and is the
/// general d-dimensional mean family.
enum class FamilyKind { gaussian_location, gaussian_full_mean, finite_discrete };

const char* family_kind_name(FamilyKind k);
FamilyKind family_kind_from_name(const std::string& name);

/// A parametric family {P_theta}: densities, scores, sampling, and the
/// total-variation geometry used by the generalization bound.
class ParamFamily {
 public:
  /// N(theta, Sigma), theta in R^d, Sigma fixed SPD.
  static ParamFamily gaussian_location(const Mat& cov);
  static ParamFamily gaussian_full_mean(const Mat& cov);
  /// Distribution on the rows of `support` (K x d) with simplex parameter.
  static ParamFamily finite_discrete(const Mat& support);

  FamilyKind kind() const { return kind_; }
  bool is_gaussian() const { return kind_ != FamilyKind::finite_discrete; }
  int param_dim() const { return q_; }
  int data_dim() const { return d_; }

  const Mat& cov() const { return cov_; }
  const Mat& cov_inv() const { return cov_inv_; }
  const Mat& cov_chol_l() const { return chol_l_; }
  double cov_logdet() const { return cov_logdet_; }
  double cov_min_eig() const { return cov_min_eig_; }
  const Mat& support() const { return support_; }

  /// Box bounds on theta for the gaussian kinds (simplex for discrete).
  const Vec& theta_lo() const { return theta_lo_; }
  const Vec& theta_hi() const { return theta_hi_; }
  void set_theta_box(const Vec& lo, const Vec& hi);

  /// Throws DomainError when theta has the wrong size or leaves the
  /// parameter set (box / simplex within 1e-9).
  void validate_theta(const Vec& theta) const;
  /// True when theta is strictly inside the parameter set.
  bool theta_interior(const Vec& theta, double margin = 1e-9) const;

  double log_density(const Vec& theta, const Vec& z) const;
  /// Gradient of log p_theta(z) in theta.
  Vec score(const Vec& theta, const Vec& z) const;
  /// Hessian of log p_theta(z) in theta.
  Mat log_density_hessian(const Vec& theta, const Vec& z) const;

  /// n i.i.d. draws from P_theta, one per row.
  Mat sample(const Vec& theta, int n, RngStream& rng) const;

  /// Exact total variation distance TV(P_a, P_b).
  double tv_distance(const Vec& theta_a, const Vec& theta_b) const;
  /// Lipschitz constant of theta -> P_theta in total variation.
  double tv_lipschitz() const;

  /// Index of the support atom equal to z (1e-12 tolerance); discrete only.
  int atom_index(const Vec& z) const;

 private:
  ParamFamily() = default;

  FamilyKind kind_ = FamilyKind::gaussian_location;
  int q_ = 0;
  int d_ = 0;
  Mat cov_, cov_inv_, chol_l_;
  double cov_logdet_ = 0.0;
  double cov_min_eig_ = 0.0;
  Mat support_;
  Vec theta_lo_, theta_hi_;
};

using FamilyPtr = std::shared_ptr<const ParamFamily>;

}  // namespace regret

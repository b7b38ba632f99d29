#pragma once

#include <functional>
#include <string>
#include <vector>

#include "regret/family.hpp"
#include "regret/quadrature.hpp"

namespace regret {

/// How the data-generating law is specified.
enum class TrueKind { in_family, gaussian_mixture, empirical };

const char* true_kind_name(TrueKind k);

/// One-dimensional marginal law: a gaussian mixture, a set of atoms, or both
/// empty sides never mix (a marginal is either continuous or purely atomic).
/// This is the workhorse of every closed-form newsvendor formula.
struct Marginal1D {
  struct GComp {
    double w, mu, sigma;
  };
  struct Atom {
    double w, x;
  };
  std::vector<GComp> comps;
  std::vector<Atom> atoms;  ///< sorted by x, weights summing to 1

  bool atomic() const { return comps.empty(); }
  double cdf(double x) const;
  double pdf(double x) const;  ///< atomic marginals throw DomainError
  /// Left-continuous generalized inverse inf{x : F(x) >= p}, p in (0,1).
  double quantile(double p) const;
  double mean() const;
  double variance() const;
};

/// The true law P of the data: either a member of the family, an explicit
/// gaussian mixture with a shared covariance, or an empirical sample.
class TrueDistribution {
 public:
  static TrueDistribution in_family(FamilyPtr family, const Vec& theta0);
  static TrueDistribution gaussian_mixture(std::vector<double> weights,
                                           std::vector<Vec> means,
                                           const Mat& cov);
  static TrueDistribution empirical(const Mat& rows);

  TrueKind kind() const { return kind_; }
  int dim() const { return d_; }

  /// True when P is a (mixture of) gaussians with a shared covariance;
  /// in-family gaussian counts with one component.
  bool is_gaussian_mix() const;
  /// True when P is purely atomic (empirical data or in-family discrete).
  bool is_atomic() const;

  /// Gaussian-mixture view (requires is_gaussian_mix()).
  const std::vector<double>& mix_weights() const { return weights_; }
  const std::vector<Vec>& mix_means() const { return means_; }
  const Mat& mix_cov() const { return cov_; }
  const Mat& mix_cov_inv() const { return cov_inv_; }

  /// Atomic view (requires is_atomic()): rows and matching weights.
  const Mat& atom_rows() const { return rows_; }
  const std::vector<double>& atom_weights() const { return atom_w_; }

  /// In-family view.
  const FamilyPtr& family() const { return family_; }
  const Vec& theta0() const { return theta0_; }

  Mat draw(int n, RngStream& rng) const;
  Vec mean() const;
  Mat covariance() const;
  Marginal1D marginal(int coord) const;

  /// E_P[f(z)] for smooth f: exact sums over atoms, tensor Gauss-Hermite per
  /// gaussian component with node-count escalation otherwise.
  QuadResult expect(const std::function<double(const Vec&)>& f,
                    const QuadSpec& spec) const;

  /// E_P[f(z_i)] for a scalar function of one coordinate with known kinks:
  /// panel quadrature split exactly at the kinks (exact sums for atoms).
  QuadResult expect_marginal(int coord, const std::function<double(double)>& f,
                             std::vector<double> kinks,
                             const QuadSpec& spec) const;

  /// P(z_i <= a and z_j <= b) for i != j (gaussian mixtures only):
  /// product of marginals per component when the component correlation
  /// vanishes, otherwise a conditional-CDF panel quadrature.
  double joint_lower_prob(int i, int j, double a, double b,
                          const QuadSpec& spec) const;

  /// Default: an empty placeholder (dim 0) that fails Instance::validate();
  /// real laws come from the named factories.
  TrueDistribution() = default;

 private:

  TrueKind kind_ = TrueKind::in_family;
  int d_ = 0;
  FamilyPtr family_;
  Vec theta0_;
  std::vector<double> weights_;  // gaussian-mixture view
  std::vector<Vec> means_;
  Mat cov_, cov_inv_, chol_l_;
  Mat rows_;  // atomic view
  std::vector<double> atom_w_;
};

}  // namespace regret

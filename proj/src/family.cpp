#include "regret/family.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594;
constexpr double kSimplexTol = 1e-9;
}  // namespace

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::gaussian_location: return "gaussian-location";
    case FamilyKind::gaussian_full_mean: return "gaussian-full-mean";
    case FamilyKind::finite_discrete: return "finite-discrete";
  }
  return "unknown";
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "gaussian-location") return FamilyKind::gaussian_location;
  if (name == "gaussian-full-mean") return FamilyKind::gaussian_full_mean;
  if (name == "finite-discrete") return FamilyKind::finite_discrete;
  throw ConfigError("unknown family kind: '" + name + "'");
}

ParamFamily ParamFamily::gaussian_location(const Mat& cov) {
  ParamFamily f;
  f.kind_ = FamilyKind::gaussian_location;
  if (cov.rows() != cov.cols() || cov.rows() < 1) {
    throw DomainError("gaussian family: covariance must be square");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("gaussian family: covariance must be symmetric");
  }
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DomainError("gaussian family: covariance must be positive definite");
  }
  f.d_ = static_cast<int>(cov.rows());
  f.q_ = f.d_;
  f.cov_ = symmetrize(cov);
  f.chol_l_ = llt.matrixL();
  f.cov_inv_ = llt.solve(Mat::Identity(f.d_, f.d_));
  f.cov_logdet_ = 0.0;
  for (int i = 0; i < f.d_; ++i) f.cov_logdet_ += 2.0 * std::log(f.chol_l_(i, i));
  f.cov_min_eig_ = min_eig_sym(f.cov_);
  f.theta_lo_ = Vec::Constant(f.q_, -50.0);
  f.theta_hi_ = Vec::Constant(f.q_, 50.0);
  return f;
}

ParamFamily ParamFamily::gaussian_full_mean(const Mat& cov) {
  ParamFamily f = gaussian_location(cov);
  f.kind_ = FamilyKind::gaussian_full_mean;
  return f;
}

ParamFamily ParamFamily::finite_discrete(const Mat& support) {
  if (support.rows() < 2) {
    throw DomainError("finite-discrete family: need at least 2 support atoms");
  }
  for (int i = 0; i < support.rows(); ++i) {
    for (int j = i + 1; j < support.rows(); ++j) {
      if ((support.row(i) - support.row(j)).cwiseAbs().maxCoeff() < 1e-12) {
        throw DomainError("finite-discrete family: duplicate support atoms");
      }
    }
  }
  ParamFamily f;
  f.kind_ = FamilyKind::finite_discrete;
  f.support_ = support;
  f.q_ = static_cast<int>(support.rows());
  f.d_ = static_cast<int>(support.cols());
  f.theta_lo_ = Vec::Zero(f.q_);
  f.theta_hi_ = Vec::Ones(f.q_);
  return f;
}

void ParamFamily::set_theta_box(const Vec& lo, const Vec& hi) {
  if (kind_ == FamilyKind::finite_discrete) {
    throw DomainError("finite-discrete family: parameter set is the simplex");
  }
  if (lo.size() != q_ || hi.size() != q_ || ((hi - lo).array() <= 0).any()) {
    throw DomainError("set_theta_box: need lo < hi of parameter dimension");
  }
  theta_lo_ = lo;
  theta_hi_ = hi;
}

void ParamFamily::validate_theta(const Vec& theta) const {
  if (theta.size() != q_) {
    throw DomainError("theta has dimension " + std::to_string(theta.size()) +
                      ", expected " + std::to_string(q_));
  }
  if (kind_ == FamilyKind::finite_discrete) {
    if ((theta.array() < -kSimplexTol).any()) {
      throw DomainError("simplex parameter has a negative entry");
    }
    if (std::fabs(theta.sum() - 1.0) > kSimplexTol) {
      throw DomainError("simplex parameter does not sum to 1");
    }
    return;
  }
  for (int i = 0; i < q_; ++i) {
    if (theta[i] < theta_lo_[i] - kSimplexTol ||
        theta[i] > theta_hi_[i] + kSimplexTol) {
      throw DomainError("theta leaves the parameter box at coordinate " +
                        std::to_string(i));
    }
  }
}

bool ParamFamily::theta_interior(const Vec& theta, double margin) const {
  if (theta.size() != q_) return false;
  if (kind_ == FamilyKind::finite_discrete) {
    return (theta.array() > margin).all() &&
           std::fabs(theta.sum() - 1.0) <= kSimplexTol;
  }
  return (theta.array() > theta_lo_.array() + margin).all() &&
         (theta.array() < theta_hi_.array() - margin).all();
}

double ParamFamily::log_density(const Vec& theta, const Vec& z) const {
  validate_theta(theta);
  if (z.size() != d_) throw DomainError("log_density: z has wrong dimension");
  if (kind_ == FamilyKind::finite_discrete) {
    const int k = atom_index(z);
    const double p = theta[k];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(p);
  }
  const Vec r = z - theta;
  const double quad = r.dot(cov_inv_ * r);
  return -0.5 * (d_ * kLog2Pi + cov_logdet_ + quad);
}

Vec ParamFamily::score(const Vec& theta, const Vec& z) const {
  validate_theta(theta);
  if (z.size() != d_) throw DomainError("score: z has wrong dimension");
  if (kind_ == FamilyKind::finite_discrete) {
    const int k = atom_index(z);
    if (theta[k] <= 0.0) {
      throw DomainError("score: atom probability is zero at the data point");
    }
    Vec g = Vec::Zero(q_);
    g[k] = 1.0 / theta[k];
    return g;
  }
  return cov_inv_ * (z - theta);
}

Mat ParamFamily::log_density_hessian(const Vec& theta, const Vec& z) const {
  validate_theta(theta);
  if (z.size() != d_) {
    throw DomainError("log_density_hessian: z has wrong dimension");
  }
  if (kind_ == FamilyKind::finite_discrete) {
    const int k = atom_index(z);
    if (theta[k] <= 0.0) {
      throw DomainError("log_density_hessian: zero atom probability");
    }
    Mat h = Mat::Zero(q_, q_);
    h(k, k) = -1.0 / (theta[k] * theta[k]);
    return h;
  }
  return -cov_inv_;
}

Mat ParamFamily::sample(const Vec& theta, int n, RngStream& rng) const {
  validate_theta(theta);
  if (n < 0) throw DomainError("sample: n must be >= 0");
  Mat out(n, d_);
  if (kind_ == FamilyKind::finite_discrete) {
    for (int i = 0; i < n; ++i) {
      const double u = rng.next_uniform();
      double acc = 0.0;
      int pick = q_ - 1;
      for (int k = 0; k < q_; ++k) {
        acc += theta[k];
        if (u <= acc) {
          pick = k;
          break;
        }
      }
      out.row(i) = support_.row(pick);
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    Vec xi(d_);
    for (int j = 0; j < d_; ++j) xi[j] = rng.next_normal();
    out.row(i) = (theta + chol_l_ * xi).transpose();
  }
  return out;
}

double ParamFamily::tv_distance(const Vec& theta_a, const Vec& theta_b) const {
  validate_theta(theta_a);
  validate_theta(theta_b);
  if (kind_ == FamilyKind::finite_discrete) {
    return 0.5 * (theta_a - theta_b).lpNorm<1>();
  }
  // Equal covariances: TV = 2 Phi(m/2) - 1 with m the Mahalanobis distance.
  const Vec delta = theta_a - theta_b;
  const double m = std::sqrt(delta.dot(cov_inv_ * delta));
  return 2.0 * norm_cdf(0.5 * m) - 1.0;
}

double ParamFamily::tv_lipschitz() const {
  if (kind_ == FamilyKind::finite_discrete) {
    // TV = l1/2 <= sqrt(q)/2 * l2.
    return 0.5 * std::sqrt(static_cast<double>(q_));
  }
  // d/dm [2 Phi(m/2) - 1] at 0 = phi(0), and m <= |delta| / sqrt(lambda_min).
  return norm_pdf(0.0) / std::sqrt(cov_min_eig_);
}

int ParamFamily::atom_index(const Vec& z) const {
  if (kind_ != FamilyKind::finite_discrete) {
    throw DomainError("atom_index: family is not finite-discrete");
  }
  for (int k = 0; k < q_; ++k) {
    if ((support_.row(k).transpose() - z).cwiseAbs().maxCoeff() < 1e-12) {
      return k;
    }
  }
  throw DomainError("atom_index: z is not a support atom of the family");
}

}  // namespace regret

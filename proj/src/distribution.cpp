#include "regret/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

namespace {
constexpr double kWeightTol = 1e-9;
}

const char* true_kind_name(TrueKind k) {
  switch (k) {
    case TrueKind::in_family: return "in-family";
    case TrueKind::gaussian_mixture: return "gaussian-mixture";
    case TrueKind::empirical: return "empirical";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Marginal1D

double Marginal1D::cdf(double x) const {
  if (atomic()) {
    double acc = 0.0;
    for (const Atom& a : atoms) {
      if (a.x <= x) acc += a.w;
    }
    return acc;
  }
  double acc = 0.0;
  for (const GComp& c : comps) acc += c.w * norm_cdf((x - c.mu) / c.sigma);
  return acc;
}

double Marginal1D::pdf(double x) const {
  if (atomic()) {
    throw DomainError("Marginal1D::pdf: marginal is purely atomic");
  }
  double acc = 0.0;
  for (const GComp& c : comps) acc += c.w / c.sigma * norm_pdf((x - c.mu) / c.sigma);
  return acc;
}

double Marginal1D::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("Marginal1D::quantile: p must lie in (0,1)");
  }
  if (atomic()) {
    double acc = 0.0;
    for (const Atom& a : atoms) {
      acc += a.w;
      if (acc >= p - 1e-12) return a.x;
    }
    return atoms.back().x;
  }
  double lo = comps.front().mu, hi = comps.front().mu;
  for (const GComp& c : comps) {
    lo = std::min(lo, c.mu - 14.0 * c.sigma);
    hi = std::max(hi, c.mu + 14.0 * c.sigma);
  }
  while (cdf(lo) > p) lo -= 10.0;
  while (cdf(hi) < p) hi += 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double Marginal1D::mean() const {
  double m = 0.0;
  if (atomic()) {
    for (const Atom& a : atoms) m += a.w * a.x;
  } else {
    for (const GComp& c : comps) m += c.w * c.mu;
  }
  return m;
}

double Marginal1D::variance() const {
  const double m = mean();
  double s = 0.0;
  if (atomic()) {
    for (const Atom& a : atoms) s += a.w * a.x * a.x;
  } else {
    for (const GComp& c : comps) s += c.w * (c.mu * c.mu + c.sigma * c.sigma);
  }
  return s - m * m;
}

// ----------------------------------------------------------- TrueDistribution

TrueDistribution TrueDistribution::in_family(FamilyPtr family,
                                             const Vec& theta0) {
  if (!family) throw DomainError("in_family: null family");
  family->validate_theta(theta0);
  TrueDistribution p;
  p.kind_ = TrueKind::in_family;
  p.family_ = family;
  p.theta0_ = theta0;
  p.d_ = family->data_dim();
  if (family->is_gaussian()) {
    p.weights_ = {1.0};
    p.means_ = {theta0};
    p.cov_ = family->cov();
    p.cov_inv_ = family->cov_inv();
    p.chol_l_ = family->cov_chol_l();
  } else {
    p.rows_ = family->support();
    p.atom_w_.assign(theta0.data(), theta0.data() + theta0.size());
  }
  return p;
}

TrueDistribution TrueDistribution::gaussian_mixture(
    std::vector<double> weights, std::vector<Vec> means, const Mat& cov) {
  if (weights.empty() || weights.size() != means.size()) {
    throw DomainError("gaussian_mixture: weights and means must match");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw DomainError("gaussian_mixture: weights must be > 0");
    total += w;
  }
  if (std::fabs(total - 1.0) > kWeightTol) {
    throw DomainError("gaussian_mixture: weights must sum to 1");
  }
  const int d = static_cast<int>(means.front().size());
  for (const Vec& m : means) {
    if (m.size() != d) throw DomainError("gaussian_mixture: mean dims differ");
  }
  if (cov.rows() != d || cov.cols() != d) {
    throw DomainError("gaussian_mixture: covariance dimension mismatch");
  }
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DomainError("gaussian_mixture: covariance must be positive definite");
  }
  TrueDistribution p;
  p.kind_ = TrueKind::gaussian_mixture;
  p.d_ = d;
  p.weights_ = std::move(weights);
  p.means_ = std::move(means);
  p.cov_ = symmetrize(cov);
  p.cov_inv_ = llt.solve(Mat::Identity(d, d));
  p.chol_l_ = llt.matrixL();
  return p;
}

TrueDistribution TrueDistribution::empirical(const Mat& rows) {
  if (rows.rows() < 1) throw DomainError("empirical: need at least one row");
  TrueDistribution p;
  p.kind_ = TrueKind::empirical;
  p.d_ = static_cast<int>(rows.cols());
  p.rows_ = rows;
  p.atom_w_.assign(static_cast<std::size_t>(rows.rows()),
                   1.0 / static_cast<double>(rows.rows()));
  return p;
}

bool TrueDistribution::is_gaussian_mix() const {
  return kind_ == TrueKind::gaussian_mixture ||
         (kind_ == TrueKind::in_family && family_->is_gaussian());
}

bool TrueDistribution::is_atomic() const { return !is_gaussian_mix(); }

Mat TrueDistribution::draw(int n, RngStream& rng) const {
  if (n < 0) throw DomainError("draw: n must be >= 0");
  if (kind_ == TrueKind::in_family) return family_->sample(theta0_, n, rng);
  Mat out(n, d_);
  if (is_atomic()) {
    // Weighted atoms (empirical resampling).
    for (int i = 0; i < n; ++i) {
      const double u = rng.next_uniform();
      double acc = 0.0;
      int pick = static_cast<int>(atom_w_.size()) - 1;
      for (std::size_t k = 0; k < atom_w_.size(); ++k) {
        acc += atom_w_[k];
        if (u <= acc) {
          pick = static_cast<int>(k);
          break;
        }
      }
      out.row(i) = rows_.row(pick);
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    int comp = 0;
    if (weights_.size() > 1) {
      const double u = rng.next_uniform();
      double acc = 0.0;
      comp = static_cast<int>(weights_.size()) - 1;
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        acc += weights_[k];
        if (u <= acc) {
          comp = static_cast<int>(k);
          break;
        }
      }
    }
    Vec xi(d_);
    for (int j = 0; j < d_; ++j) xi[j] = rng.next_normal();
    out.row(i) = (means_[comp] + chol_l_ * xi).transpose();
  }
  return out;
}

Vec TrueDistribution::mean() const {
  Vec m = Vec::Zero(d_);
  if (is_atomic()) {
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      m += atom_w_[static_cast<std::size_t>(i)] * rows_.row(i).transpose();
    }
    return m;
  }
  for (std::size_t k = 0; k < weights_.size(); ++k) m += weights_[k] * means_[k];
  return m;
}

Mat TrueDistribution::covariance() const {
  const Vec m = mean();
  Mat c = Mat::Zero(d_, d_);
  if (is_atomic()) {
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      const Vec r = rows_.row(i).transpose() - m;
      c += atom_w_[static_cast<std::size_t>(i)] * r * r.transpose();
    }
    return c;
  }
  c = cov_;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const Vec r = means_[k] - m;
    c += weights_[k] * r * r.transpose();
  }
  return c;
}

Marginal1D TrueDistribution::marginal(int coord) const {
  if (coord < 0 || coord >= d_) throw DomainError("marginal: bad coordinate");
  Marginal1D m;
  if (is_atomic()) {
    std::vector<Marginal1D::Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(rows_.rows()));
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      atoms.push_back({atom_w_[static_cast<std::size_t>(i)], rows_(i, coord)});
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.x < b.x; });
    // Merge exactly equal positions so the CDF walk is well defined.
    for (const auto& a : atoms) {
      if (!m.atoms.empty() && a.x == m.atoms.back().x) {
        m.atoms.back().w += a.w;
      } else {
        m.atoms.push_back(a);
      }
    }
    return m;
  }
  const double sigma = std::sqrt(cov_(coord, coord));
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    m.comps.push_back({weights_[k], means_[k][coord], sigma});
  }
  return m;
}

namespace {

// Tensor-product Gauss-Hermite over one gaussian component.
double tensor_gh_component(const std::function<double(const Vec&)>& f,
                           const Vec& mu, const Mat& chol_l, int nodes,
                           int* evals) {
  const int d = static_cast<int>(mu.size());
  const QuadRule& rule = gauss_hermite_prob(nodes);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vec u(d);
  double acc = 0.0;
  while (true) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      u[j] = rule.nodes[idx[static_cast<std::size_t>(j)]];
      w *= rule.weights[idx[static_cast<std::size_t>(j)]];
    }
    acc += w * f(mu + chol_l * u);
    ++*evals;
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < nodes) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == d) break;
  }
  return acc;
}

int start_nodes_for_dim(int d, const QuadSpec& spec) {
  if (d <= 1) return spec.gh_nodes;
  if (d == 2) return std::min(spec.gh_nodes, 60);
  if (d == 3) return std::min(spec.gh_nodes, 24);
  return std::min(spec.gh_nodes, 10);
}

int max_nodes_for_dim(int d, const QuadSpec& spec) {
  if (d <= 1) return spec.gh_max_nodes;
  if (d == 2) return std::min(spec.gh_max_nodes, 240);
  if (d == 3) return std::min(spec.gh_max_nodes, 96);
  return std::min(spec.gh_max_nodes, 20);
}

}  // namespace

QuadResult TrueDistribution::expect(const std::function<double(const Vec&)>& f,
                                    const QuadSpec& spec) const {
  QuadResult res;
  if (is_atomic()) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      acc += atom_w_[static_cast<std::size_t>(i)] * f(rows_.row(i).transpose());
      ++res.evaluations;
    }
    res.value = acc;
    return res;
  }
  int nodes = start_nodes_for_dim(d_, spec);
  const int cap = std::max(nodes, max_nodes_for_dim(d_, spec));
  auto eval_all = [&](int n_nodes) {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      acc += weights_[k] * tensor_gh_component(f, means_[k], chol_l_, n_nodes,
                                               &res.evaluations);
    }
    return acc;
  };
  double prev = eval_all(nodes);
  while (true) {
    if (nodes >= cap) {
      res.value = prev;
      res.converged = false;
      return res;
    }
    nodes = std::min(2 * nodes, cap);
    const double cur = eval_all(nodes);
    res.err_est = std::fabs(cur - prev);
    const bool ok =
        res.err_est <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(cur));
    prev = cur;
    if (ok) {
      res.value = cur;
      res.converged = true;
      return res;
    }
  }
}

QuadResult TrueDistribution::expect_marginal(
    int coord, const std::function<double(double)>& f,
    std::vector<double> kinks, const QuadSpec& spec) const {
  QuadResult res;
  const Marginal1D marg = marginal(coord);
  if (marg.atomic()) {
    double acc = 0.0;
    for (const auto& a : marg.atoms) {
      acc += a.w * f(a.x);
      ++res.evaluations;
    }
    res.value = acc;
    return res;
  }
  double lo = marg.comps.front().mu, hi = lo;
  for (const auto& c : marg.comps) {
    lo = std::min(lo, c.mu - spec.tail_sigmas * c.sigma);
    hi = std::max(hi, c.mu + spec.tail_sigmas * c.sigma);
  }
  std::vector<double> breaks;
  breaks.push_back(lo);
  for (const auto& c : marg.comps) breaks.push_back(c.mu);
  for (double k : kinks) {
    if (k > lo && k < hi) breaks.push_back(k);
  }
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  return integrate_piecewise([&](double x) { return f(x) * marg.pdf(x); },
                             breaks, spec);
}

double TrueDistribution::joint_lower_prob(int i, int j, double a, double b,
                                          const QuadSpec& spec) const {
  if (!is_gaussian_mix()) {
    throw NotImplementedError(
        "joint_lower_prob: only gaussian mixtures are supported");
  }
  if (i == j) throw DomainError("joint_lower_prob: coordinates must differ");
  const double si = std::sqrt(cov_(i, i));
  const double sj = std::sqrt(cov_(j, j));
  const double rho = cov_(i, j) / (si * sj);
  double acc = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double mi = means_[k][i];
    const double mj = means_[k][j];
    if (std::fabs(rho) < 1e-14) {
      acc += weights_[k] * norm_cdf((a - mi) / si) * norm_cdf((b - mj) / sj);
      continue;
    }
    const double lo = mi - spec.tail_sigmas * si;
    if (a <= lo) continue;
    const double hi = std::min(a, mi + spec.tail_sigmas * si);
    const double denom = sj * std::sqrt(1.0 - rho * rho);
    const QuadResult q = integrate_segment(
        [&](double x) {
          const double cond_mean = mj + rho * sj / si * (x - mi);
          return norm_pdf((x - mi) / si) / si *
                 norm_cdf((b - cond_mean) / denom);
        },
        lo, hi, spec);
    acc += weights_[k] * q.value;
  }
  return acc;
}

}  // namespace regret

#include "regret/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

namespace {
constexpr double kExpGuard = 500.0;  // exponent cap before declaring overflow

double safe_exp(double x) {
  if (x > kExpGuard) {
    throw SolverError("portfolio expected cost overflowed (exponent > 500); "
                      "the decision left the tractable region");
  }
  return std::exp(x);
}
}  // namespace

const char* cost_kind_name(CostKind k) {
  switch (k) {
    case CostKind::newsvendor: return "newsvendor";
    case CostKind::portfolio: return "portfolio";
  }
  return "unknown";
}

CostKind cost_kind_from_name(const std::string& name) {
  if (name == "newsvendor") return CostKind::newsvendor;
  if (name == "portfolio") return CostKind::portfolio;
  throw ConfigError("unknown cost model: '" + name + "'");
}

CostModel CostModel::newsvendor(const Vec& h, const Vec& b, double smoothing) {
  CostModel m;
  m.kind = CostKind::newsvendor;
  m.dim = static_cast<int>(h.size());
  m.h = h;
  m.b = b;
  m.smoothing = smoothing;
  m.validate();
  return m;
}

CostModel CostModel::portfolio(int dim, double gamma) {
  CostModel m;
  m.kind = CostKind::portfolio;
  m.dim = dim;
  m.gamma = gamma;
  m.validate();
  return m;
}

void CostModel::validate() const {
  if (dim < 1) throw DomainError("cost model: dimension must be >= 1");
  if (kind == CostKind::newsvendor) {
    if (h.size() != dim || b.size() != dim) {
      throw DomainError("newsvendor: h and b must have the decision dimension");
    }
    if ((h.array() <= 0).any() || (b.array() <= 0).any()) {
      throw DomainError("newsvendor: holding and backorder costs must be > 0");
    }
    if (smoothing < 0.0) throw DomainError("newsvendor: smoothing must be >= 0");
  } else {
    if (gamma <= 0.0) {
      throw DomainError("portfolio: ridge weight gamma must be > 0");
    }
  }
}

double CostModel::strong_convexity() const {
  if (kind == CostKind::portfolio) return 2.0 * gamma;
  if (std::isnan(curvature)) {
    throw DomainError(
        "newsvendor: strong-convexity modulus must be supplied (field "
        "'curvature') — it depends on the density near the fractile");
  }
  return curvature;
}

Vec CostModel::fractiles() const {
  if (kind != CostKind::newsvendor) {
    throw DomainError("fractiles: only defined for the newsvendor model");
  }
  return (b.array() / (b.array() + h.array())).matrix();
}

double cost_value(const CostModel& m, const Vec& omega, const Vec& z) {
  if (omega.size() != m.dim || z.size() != m.dim) {
    throw DomainError("cost_value: dimension mismatch");
  }
  if (m.kind == CostKind::portfolio) {
    return safe_exp(-z.dot(omega)) + m.gamma * omega.squaredNorm();
  }
  double acc = 0.0;
  for (int i = 0; i < m.dim; ++i) {
    acc += m.h[i] * softplus(omega[i] - z[i], m.smoothing) +
           m.b[i] * softplus(z[i] - omega[i], m.smoothing);
  }
  return acc;
}

Vec cost_grad(const CostModel& m, const Vec& omega, const Vec& z) {
  if (omega.size() != m.dim || z.size() != m.dim) {
    throw DomainError("cost_grad: dimension mismatch");
  }
  if (m.kind == CostKind::portfolio) {
    return -safe_exp(-z.dot(omega)) * z + 2.0 * m.gamma * omega;
  }
  Vec g(m.dim);
  for (int i = 0; i < m.dim; ++i) {
    if (m.smoothing > 0.0) {
      g[i] = m.h[i] * sigmoid((omega[i] - z[i]) / m.smoothing) -
             m.b[i] * sigmoid((z[i] - omega[i]) / m.smoothing);
    } else {
      g[i] = (z[i] < omega[i]) ? m.h[i] : -m.b[i];
    }
  }
  return g;
}

std::vector<double> cost_kinks(const CostModel& m, int coord,
                               const Vec& omega) {
  if (coord < 0 || coord >= m.dim) throw DomainError("cost_kinks: bad coord");
  if (m.kind == CostKind::portfolio) return {};
  if (m.smoothing > 0.0) {
    // Smooth, but the curvature concentrates within a few smoothing widths;
    // report resolution hints so panel quadrature refines there.
    const double s = m.smoothing;
    return {omega[coord] - 8.0 * s, omega[coord], omega[coord] + 8.0 * s};
  }
  return {omega[coord]};
}

// ------------------------------------------------------- expectation engine

namespace {

// Partial expectations of one gaussian component:
//   E(w - Z)^+ and E(Z - w)^+ for Z ~ N(mu, sigma^2).
void partial_expectations(double w, double mu, double sigma, double* over,
                          double* under) {
  const double a = (w - mu) / sigma;
  const double cdf = norm_cdf(a);
  const double pdf = norm_pdf(a);
  *over = (w - mu) * cdf + sigma * pdf;
  *under = (mu - w) * (1.0 - cdf) + sigma * pdf;
}

CostDerivs newsvendor_exact_gaussian(const CostModel& m,
                                     const TrueDistribution& p,
                                     const Vec& omega) {
  CostDerivs out;
  out.grad = Vec::Zero(m.dim);
  out.hess = Mat::Zero(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i) {
    const Marginal1D marg = p.marginal(i);
    double value = 0.0, cdf = 0.0, pdf = 0.0;
    for (const auto& c : marg.comps) {
      double over, under;
      partial_expectations(omega[i], c.mu, c.sigma, &over, &under);
      value += c.w * (m.h[i] * over + m.b[i] * under);
      cdf += c.w * norm_cdf((omega[i] - c.mu) / c.sigma);
      pdf += c.w / c.sigma * norm_pdf((omega[i] - c.mu) / c.sigma);
    }
    out.value += value;
    out.grad[i] = m.h[i] * cdf - m.b[i] * (1.0 - cdf);
    out.hess(i, i) = (m.h[i] + m.b[i]) * pdf;
  }
  return out;
}

CostDerivs newsvendor_smoothed_gaussian(const CostModel& m,
                                        const TrueDistribution& p,
                                        const Vec& omega,
                                        const QuadSpec& spec) {
  CostDerivs out;
  out.grad = Vec::Zero(m.dim);
  out.hess = Mat::Zero(m.dim, m.dim);
  const double s = m.smoothing;
  for (int i = 0; i < m.dim; ++i) {
    const std::vector<double> kinks = cost_kinks(m, i, omega);
    const QuadResult v = p.expect_marginal(
        i,
        [&](double z) {
          return m.h[i] * softplus(omega[i] - z, s) +
                 m.b[i] * softplus(z - omega[i], s);
        },
        kinks, spec);
    const QuadResult g = p.expect_marginal(
        i,
        [&](double z) {
          return m.h[i] * sigmoid((omega[i] - z) / s) -
                 m.b[i] * sigmoid((z - omega[i]) / s);
        },
        kinks, spec);
    const QuadResult hq = p.expect_marginal(
        i,
        [&](double z) {
          const double sig = sigmoid((omega[i] - z) / s);
          return (m.h[i] + m.b[i]) * sig * (1.0 - sig) / s;
        },
        kinks, spec);
    out.value += v.value;
    out.grad[i] = g.value;
    out.hess(i, i) = hq.value;
    out.quad_converged =
        out.quad_converged && v.converged && g.converged && hq.converged;
  }
  return out;
}

CostDerivs newsvendor_atomic(const CostModel& m, const TrueDistribution& p,
                             const Vec& omega) {
  CostDerivs out;
  out.grad = Vec::Zero(m.dim);
  out.hess = Mat::Zero(m.dim, m.dim);
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    const Vec z = rows.row(k).transpose();
    out.value += w[static_cast<std::size_t>(k)] * cost_value(m, omega, z);
    out.grad += w[static_cast<std::size_t>(k)] * cost_grad(m, omega, z);
    if (m.smoothing > 0.0) {
      for (int i = 0; i < m.dim; ++i) {
        const double sig = sigmoid((omega[i] - z[i]) / m.smoothing);
        out.hess(i, i) += w[static_cast<std::size_t>(k)] * (m.h[i] + m.b[i]) *
                          sig * (1.0 - sig) / m.smoothing;
      }
    }
  }
  // Exact newsvendor over atoms has zero curvature a.e.; hess stays 0 and
  // the oracle uses the quantile path instead of Newton.
  return out;
}

// A(omega) = E exp(-z' omega) for one gaussian component.
double mgf_factor(const Vec& mu, const Mat& cov, const Vec& omega) {
  return safe_exp(-mu.dot(omega) + 0.5 * omega.dot(cov * omega));
}

CostDerivs portfolio_gaussian(const CostModel& m, const TrueDistribution& p,
                              const Vec& omega) {
  CostDerivs out;
  const Mat& cov = p.mix_cov();
  out.grad = Vec::Zero(m.dim);
  out.hess = Mat::Zero(m.dim, m.dim);
  const auto& ws = p.mix_weights();
  const auto& mus = p.mix_means();
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const double a = mgf_factor(mus[k], cov, omega);
    const Vec r = cov * omega - mus[k];
    out.value += ws[k] * a;
    out.grad += ws[k] * a * r;
    out.hess += ws[k] * a * (r * r.transpose() + cov);
  }
  out.value += m.gamma * omega.squaredNorm();
  out.grad += 2.0 * m.gamma * omega;
  out.hess += 2.0 * m.gamma * Mat::Identity(m.dim, m.dim);
  return out;
}

CostDerivs portfolio_atomic(const CostModel& m, const TrueDistribution& p,
                            const Vec& omega) {
  CostDerivs out;
  out.grad = Vec::Zero(m.dim);
  out.hess = Mat::Zero(m.dim, m.dim);
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    const Vec z = rows.row(k).transpose();
    const double e = safe_exp(-z.dot(omega));
    const double wk = w[static_cast<std::size_t>(k)];
    out.value += wk * e;
    out.grad -= wk * e * z;
    out.hess += wk * e * z * z.transpose();
  }
  out.value += m.gamma * omega.squaredNorm();
  out.grad += 2.0 * m.gamma * omega;
  out.hess += 2.0 * m.gamma * Mat::Identity(m.dim, m.dim);
  return out;
}

}  // namespace

CostDerivs expected_cost_derivs(const CostModel& m, const TrueDistribution& p,
                                const Vec& omega, const QuadSpec& spec) {
  if (omega.size() != m.dim) {
    throw DomainError("expected_cost_derivs: omega dimension mismatch");
  }
  if (p.dim() != m.dim) {
    throw DomainError("expected_cost_derivs: distribution dimension mismatch");
  }
  if (m.kind == CostKind::portfolio) {
    return p.is_atomic() ? portfolio_atomic(m, p, omega)
                         : portfolio_gaussian(m, p, omega);
  }
  if (p.is_atomic()) return newsvendor_atomic(m, p, omega);
  if (m.smoothing > 0.0) return newsvendor_smoothed_gaussian(m, p, omega, spec);
  return newsvendor_exact_gaussian(m, p, omega);
}

double expected_cost(const CostModel& m, const TrueDistribution& p,
                     const Vec& omega, const QuadSpec& spec) {
  return expected_cost_derivs(m, p, omega, spec).value;
}

namespace {

// Smoothed-newsvendor coordinate gradient X_i = (h+b) sigmoid((w-z)/s) - b as
// first/second moments under one gaussian marginal component.
void smoothed_coord_moments(const CostModel& m, int i, double w, double mu,
                            double sigma, const QuadSpec& spec, double* m1,
                            double* m2) {
  const double s = m.smoothing;
  std::vector<double> breaks = {mu - spec.tail_sigmas * sigma,
                                w - 8.0 * s, w, w + 8.0 * s,
                                mu + spec.tail_sigmas * sigma};
  std::sort(breaks.begin(), breaks.end());
  const double lo = mu - spec.tail_sigmas * sigma;
  const double hi = mu + spec.tail_sigmas * sigma;
  std::vector<double> clipped;
  clipped.push_back(lo);
  for (double x : breaks) {
    if (x > lo && x < hi) clipped.push_back(x);
  }
  clipped.push_back(hi);
  auto xfun = [&](double z) {
    return m.h[i] * sigmoid((w - z) / s) - m.b[i] * sigmoid((z - w) / s);
  };
  const QuadResult r1 = integrate_piecewise(
      [&](double z) { return xfun(z) * norm_pdf((z - mu) / sigma) / sigma; },
      clipped, spec);
  const QuadResult r2 = integrate_piecewise(
      [&](double z) {
        const double x = xfun(z);
        return x * x * norm_pdf((z - mu) / sigma) / sigma;
      },
      clipped, spec);
  *m1 = r1.value;
  *m2 = r2.value;
}

MomentPair newsvendor_moments_gaussian(const CostModel& m,
                                       const TrueDistribution& p,
                                       const Vec& omega,
                                       const QuadSpec& spec) {
  const int d = m.dim;
  MomentPair out;
  out.mean = Vec::Zero(d);
  Mat second = Mat::Zero(d, d);
  if (m.smoothing == 0.0) {
    Vec cdf(d);
    for (int i = 0; i < d; ++i) {
      cdf[i] = p.marginal(i).cdf(omega[i]);
      out.mean[i] = m.h[i] * cdf[i] - m.b[i] * (1.0 - cdf[i]);
      second(i, i) =
          m.h[i] * m.h[i] * cdf[i] + m.b[i] * m.b[i] * (1.0 - cdf[i]);
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double q11 = p.joint_lower_prob(i, j, omega[i], omega[j], spec);
        const double q10 = cdf[i] - q11;
        const double q01 = cdf[j] - q11;
        const double q00 = 1.0 - cdf[i] - cdf[j] + q11;
        const double e = m.h[i] * m.h[j] * q11 - m.h[i] * m.b[j] * q10 -
                         m.b[i] * m.h[j] * q01 + m.b[i] * m.b[j] * q00;
        second(i, j) = e;
        second(j, i) = e;
      }
    }
  } else {
    // Per-component moments; cross terms need per-component independence.
    const auto& ws = p.mix_weights();
    const auto& mus = p.mix_means();
    const Mat& cov = p.mix_cov();
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (std::fabs(cov(i, j)) > 1e-14) {
          throw NotImplementedError(
              "smoothed newsvendor gradient moments need a diagonal "
              "covariance when the decision dimension exceeds 1");
        }
      }
    }
    Mat m1(static_cast<Eigen::Index>(ws.size()), d);
    Mat m2(static_cast<Eigen::Index>(ws.size()), d);
    for (std::size_t k = 0; k < ws.size(); ++k) {
      for (int i = 0; i < d; ++i) {
        double a, b2;
        smoothed_coord_moments(m, i, omega[i], mus[k][i],
                               std::sqrt(cov(i, i)), spec, &a, &b2);
        m1(static_cast<Eigen::Index>(k), i) = a;
        m2(static_cast<Eigen::Index>(k), i) = b2;
      }
    }
    for (std::size_t k = 0; k < ws.size(); ++k) {
      for (int i = 0; i < d; ++i) {
        out.mean[i] += ws[k] * m1(static_cast<Eigen::Index>(k), i);
        second(i, i) += ws[k] * m2(static_cast<Eigen::Index>(k), i);
        for (int j = i + 1; j < d; ++j) {
          const double e = ws[k] * m1(static_cast<Eigen::Index>(k), i) *
                           m1(static_cast<Eigen::Index>(k), j);
          second(i, j) += e;
          second(j, i) += e;
        }
      }
    }
  }
  out.cov = second - out.mean * out.mean.transpose();
  return out;
}

MomentPair moments_atomic(const CostModel& m, const TrueDistribution& p,
                          const Vec& omega) {
  MomentPair out;
  out.mean = Vec::Zero(m.dim);
  Mat second = Mat::Zero(m.dim, m.dim);
  const Mat& rows = p.atom_rows();
  const auto& w = p.atom_weights();
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    const Vec g = cost_grad(m, omega, rows.row(k).transpose());
    out.mean += w[static_cast<std::size_t>(k)] * g;
    second += w[static_cast<std::size_t>(k)] * g * g.transpose();
  }
  out.cov = second - out.mean * out.mean.transpose();
  return out;
}

MomentPair portfolio_moments_gaussian(const CostModel& m,
                                      const TrueDistribution& p,
                                      const Vec& omega) {
  const int d = m.dim;
  const Mat& cov = p.mix_cov();
  const auto& ws = p.mix_weights();
  const auto& mus = p.mix_means();
  Vec eu = Vec::Zero(d);          // E[-z exp(-z'w)]
  Mat euu = Mat::Zero(d, d);      // E[z z' exp(-2 z'w)]
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const double a1 = mgf_factor(mus[k], cov, omega);
    const Vec m1 = mus[k] - cov * omega;
    eu -= ws[k] * a1 * m1;
    const double a2 = safe_exp(-2.0 * mus[k].dot(omega) +
                               2.0 * omega.dot(cov * omega));
    const Vec m2 = mus[k] - 2.0 * cov * omega;
    euu += ws[k] * a2 * (m2 * m2.transpose() + cov);
  }
  const Vec v = 2.0 * m.gamma * omega;
  MomentPair out;
  out.mean = eu + v;
  const Mat exx =
      euu + eu * v.transpose() + v * eu.transpose() + v * v.transpose();
  out.cov = exx - out.mean * out.mean.transpose();
  return out;
}

}  // namespace

MomentPair grad_cost_moments(const CostModel& m, const TrueDistribution& p,
                             const Vec& omega, const QuadSpec& spec) {
  if (omega.size() != m.dim || p.dim() != m.dim) {
    throw DomainError("grad_cost_moments: dimension mismatch");
  }
  if (p.is_atomic()) return moments_atomic(m, p, omega);
  if (m.kind == CostKind::portfolio) {
    return portfolio_moments_gaussian(m, p, omega);
  }
  return newsvendor_moments_gaussian(m, p, omega, spec);
}

}  // namespace regret

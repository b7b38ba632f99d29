#include "regret/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "regret/errors.hpp"

namespace regret {

namespace {

// Golub-Welsch: the nodes of an orthogonal-polynomial rule are the
// eigenvalues of the Jacobi tridiagonal matrix, the weights mu0 times the
// squared first components of the eigenvectors.
QuadRule golub_welsch(const Vec& diag, const Vec& subdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw ConditioningError("golub_welsch: tridiagonal eigensolve failed");
  }
  QuadRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = Vec(diag.size());
  for (int i = 0; i < diag.size(); ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

const QuadRule& cached_rule(int n, bool hermite) {
  if (n < 1) throw DomainError("quadrature rule size must be >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, bool>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, hermite}];
  if (!slot) {
    Vec diag = Vec::Zero(n);
    Vec sub(n > 1 ? n - 1 : 1);
    double mu0;
    if (hermite) {
      // Probabilists' Hermite: He_{k+1} = x He_k - k He_{k-1}; weight
      // function is the standard normal density, total mass 1.
      for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(double(k));
      mu0 = 1.0;
    } else {
      // Legendre on [-1,1]: beta_k = k^2 / (4k^2 - 1), total mass 2.
      for (int k = 1; k < n; ++k) {
        sub[k - 1] = std::sqrt(k * k / (4.0 * k * k - 1.0));
      }
      mu0 = 2.0;
    }
    slot = std::make_unique<QuadRule>(
        golub_welsch(diag, n > 1 ? sub : Vec(0), mu0));
  }
  return *slot;
}

double panel_pass(const std::function<double(double)>& f, double a, double b,
                  int panels, const QuadRule& rule, int* evals) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    const double half = 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += half * acc;
  }
  *evals += panels * static_cast<int>(rule.nodes.size());
  return total;
}

}  // namespace

const QuadRule& gauss_legendre(int n) { return cached_rule(n, false); }

const QuadRule& gauss_hermite_prob(int n) { return cached_rule(n, true); }

QuadResult integrate_segment(const std::function<double(double)>& f, double a,
                             double b, const QuadSpec& spec) {
  QuadResult res;
  if (!(b > a)) return res;  // empty or degenerate segment
  const QuadRule& rule = gauss_legendre(30);
  int panels = 1;
  double prev = panel_pass(f, a, b, panels, rule, &res.evaluations);
  for (int pass = 0; pass < spec.panel_max_doublings; ++pass) {
    panels *= 2;
    const double cur = panel_pass(f, a, b, panels, rule, &res.evaluations);
    res.err_est = std::fabs(cur - prev);
    prev = cur;
    if (res.err_est <=
        std::max(spec.abs_tol, spec.rel_tol * std::fabs(cur))) {
      res.value = cur;
      res.converged = true;
      return res;
    }
  }
  res.value = prev;
  res.converged = false;
  return res;
}

QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               const std::vector<double>& breaks,
                               const QuadSpec& spec) {
  if (breaks.size() < 2) throw DomainError("integrate_piecewise: need >= 2 breakpoints");
  QuadResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (b < a) throw DomainError("integrate_piecewise: breakpoints not sorted");
    if (b - a < 1e-300) continue;
    const QuadResult seg = integrate_segment(f, a, b, spec);
    total.value += seg.value;
    total.err_est += seg.err_est;
    total.converged = total.converged && seg.converged;
    total.evaluations += seg.evaluations;
  }
  return total;
}

}  // namespace regret

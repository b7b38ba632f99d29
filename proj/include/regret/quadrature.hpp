#pragma once

#include <functional>
#include <vector>

#include "regret/linalg.hpp"

namespace regret {

/// Accuracy controls for the deterministic integration layer.
struct QuadSpec {
  int gh_nodes = 200;        ///< starting Gauss-Hermite size for smooth paths
  int gh_max_nodes = 800;    ///< escalation cap before giving up
  double rel_tol = 1e-9;     ///< relative convergence target
  double abs_tol = 1e-12;    ///< absolute floor for near-zero integrals
  int panel_max_doublings = 10;  ///< panel refinement cap per segment
  double tail_sigmas = 12.0;     ///< Gaussian truncation radius in sigmas
};

/// Result of a deterministic quadrature with its own error diagnostic.
struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;   ///< last refinement delta
  bool converged = true;  ///< false when the node/panel cap was hit
  int evaluations = 0;
};

/// Nodes and weights of a fixed rule.
struct QuadRule {
  Vec nodes;
  Vec weights;
};

/// Gauss-Legendre rule on [-1, 1], computed by the Golub-Welsch
/// eigenvalue method and cached per size.  Thread safe.
const QuadRule& gauss_legendre(int n);

/// Probabilists' Gauss-Hermite rule: integrates f against the standard
/// normal density, sum w_i f(x_i) ~ E[f(Z)].  Cached per size; thread safe.
const QuadRule& gauss_hermite_prob(int n);

/// Integrate f over [a, b] with uniform Gauss-Legendre panels, doubling the
/// panel count until two successive refinements agree to spec tolerances.
QuadResult integrate_segment(const std::function<double(double)>& f, double a,
                             double b, const QuadSpec& spec);

/// Integrate over [breaks.front(), breaks.back()] splitting exactly at the
/// interior breakpoints (kinks of the integrand), summing per-segment panels.
/// `breaks` must be sorted; adjacent duplicates are skipped.
QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               const std::vector<double>& breaks,
                               const QuadSpec& spec);

}  // namespace regret

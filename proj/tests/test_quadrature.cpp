#include <doctest.h>

#include <cmath>
#include <vector>

#include "regret/quadrature.hpp"
#include "regret/special.hpp"

using namespace regret;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const QuadRule& r = gauss_legendre(30);
  REQUIRE(r.nodes.size() == 30);
  // Weights sum to the interval length, nodes are symmetric.
  CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.nodes.sum() == doctest::Approx(0.0).epsilon(1e-13));
  // Degree-2 and degree-7 monomials over [-1,1].
  double i2 = 0.0, i7 = 0.0;
  for (int i = 0; i < 30; ++i) {
    i2 += r.weights(i) * r.nodes(i) * r.nodes(i);
    i7 += r.weights(i) * std::pow(r.nodes(i), 7);
  }
  CHECK(i2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(i7 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("probabilists' gauss-hermite matches normal moments") {
  const QuadRule& r = gauss_hermite_prob(40);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < r.nodes.size(); ++i) {
    m0 += r.weights(i);
    m2 += r.weights(i) * r.nodes(i) * r.nodes(i);
    m4 += r.weights(i) * std::pow(r.nodes(i), 4);
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));   // total mass
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));   // E[Z^2]
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));   // E[Z^4]
}

TEST_CASE("integrate_segment converges on smooth integrands") {
  QuadSpec spec;
  const auto cubic = [](double x) { return x * x * x; };
  const QuadResult r = integrate_segment(cubic, 0.0, 1.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));

  const auto gauss = [](double x) { return norm_pdf(x); };
  const QuadResult g = integrate_segment(gauss, -8.0, 8.0, spec);
  CHECK(g.converged);
  CHECK(g.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate_piecewise splits at kinks") {
  QuadSpec spec;
  // |x| over [-1, 1] with the kink declared: exact value 1.
  const auto f = [](double x) { return std::fabs(x); };
  const QuadResult r = integrate_piecewise(f, {-1.0, 0.0, 1.0}, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));

  // E|Z| for a standard normal = sqrt(2/pi); integrand |x| phi(x) has a kink
  // at 0.  Frozen reference value 0.7978845608028654.
  const auto g = [](double x) { return std::fabs(x) * norm_pdf(x); };
  const QuadResult e = integrate_piecewise(g, {-12.0, 0.0, 12.0}, spec);
  CHECK(e.converged);
  CHECK(e.value == doctest::Approx(0.7978845608028654).epsilon(1e-11));

  // Duplicate interior breakpoints are tolerated.
  const QuadResult d = integrate_piecewise(f, {-1.0, 0.0, 0.0, 1.0}, spec);
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("panel cap reports non-convergence instead of lying") {
  QuadSpec spec;
  spec.rel_tol = 1e-16;  // unattainably tight
  spec.abs_tol = 0.0;
  spec.panel_max_doublings = 1;
  const auto rough = [](double x) { return std::fabs(std::sin(40.0 * x)); };
  const QuadResult r = integrate_segment(rough, 0.0, 3.0, spec);
  CHECK_FALSE(r.converged);
  CHECK(r.err_est > 0.0);
}

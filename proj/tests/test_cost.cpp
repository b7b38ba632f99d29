#include <doctest.h>

#include <cmath>
#include <memory>

#include "regret/cost.hpp"
#include "regret/errors.hpp"
#include "regret/special.hpp"

using namespace regret;

namespace {

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

TrueDistribution std_normal_law() {
  Mat cov(1, 1);
  cov << 1.0;
  auto fam = std::make_shared<const ParamFamily>(
      ParamFamily::gaussian_location(cov));
  return TrueDistribution::in_family(fam, vec1(0.0));
}

TrueDistribution bimodal_mix() {
  Mat cov(1, 1);
  cov << 1.0;
  return TrueDistribution::gaussian_mixture({0.5, 0.5},
                                            {vec1(-2.0), vec1(2.0)}, cov);
}

}  // namespace

TEST_CASE("newsvendor per-sample cost and gradient") {
  const CostModel m = CostModel::newsvendor(vec1(1.0), vec1(3.0));
  // Overage side: h (omega - z).
  CHECK(cost_value(m, vec1(2.0), vec1(0.5)) ==
        doctest::Approx(1.5).epsilon(1e-15));
  // Underage side: b (z - omega).
  CHECK(cost_value(m, vec1(0.5), vec1(2.0)) ==
        doctest::Approx(4.5).epsilon(1e-15));
  CHECK(cost_grad(m, vec1(2.0), vec1(0.5))(0) == 1.0);
  CHECK(cost_grad(m, vec1(0.5), vec1(2.0))(0) == -3.0);
  // Tie resolves toward the underage side.
  CHECK(cost_grad(m, vec1(1.0), vec1(1.0))(0) == -3.0);
  // Kink location is the decision itself.
  const auto kinks = cost_kinks(m, 0, vec1(0.7));
  REQUIRE(kinks.size() == 1);
  CHECK(kinks[0] == 0.7);
}

TEST_CASE("smoothed newsvendor approaches the exact hinge") {
  const CostModel exact = CostModel::newsvendor(vec1(1.0), vec1(1.0));
  const CostModel smooth = CostModel::newsvendor(vec1(1.0), vec1(1.0), 0.01);
  // Far from the kink the softplus correction is exponentially small.
  CHECK(cost_value(smooth, vec1(2.0), vec1(0.0)) ==
        doctest::Approx(cost_value(exact, vec1(2.0), vec1(0.0))).epsilon(1e-12));
  // At the kink the smoothed cost is s log 2 per side.
  CHECK(cost_value(smooth, vec1(0.0), vec1(0.0)) ==
        doctest::Approx(2.0 * 0.01 * std::log(2.0)).epsilon(1e-12));
  // Smoothed gradient matches a finite difference in omega.
  const double h = 1e-7;
  const double fd = (cost_value(smooth, vec1(0.3 + h), vec1(0.25)) -
                     cost_value(smooth, vec1(0.3 - h), vec1(0.25))) /
                    (2.0 * h);
  CHECK(cost_grad(smooth, vec1(0.3), vec1(0.25))(0) ==
        doctest::Approx(fd).epsilon(1e-6));
  // Smoothed hinge: no true kink, but resolution hints bracket the bend.
  const auto hints = cost_kinks(smooth, 0, vec1(0.7));
  REQUIRE(hints.size() == 3);
  CHECK(hints[1] == 0.7);
  CHECK(hints[0] < 0.7);
  CHECK(hints[2] > 0.7);
}

TEST_CASE("portfolio per-sample cost and gradient") {
  const CostModel m = CostModel::portfolio(1, 0.5);
  // exp(-z omega) + gamma omega^2 at omega=1, z=0: 1 + 0.5.
  CHECK(cost_value(m, vec1(1.0), vec1(0.0)) ==
        doctest::Approx(1.5).epsilon(1e-15));
  // grad = -z exp(-z omega) + 2 gamma omega.
  const double g = cost_grad(m, vec1(1.0), vec1(2.0))(0);
  CHECK(g == doctest::Approx(-2.0 * std::exp(-2.0) + 1.0).epsilon(1e-14));
  CHECK(m.strong_convexity() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expected newsvendor cost under a gaussian in closed form") {
  QuadSpec spec;
  const TrueDistribution p = std_normal_law();
  const CostModel m = CostModel::newsvendor(vec1(1.0), vec1(1.0));
  // For h=b=1, v0(omega) = E|omega - Z| = 2 phi(omega) + omega (2 Phi(omega) - 1).
  // At omega=1: frozen reference 1.1666309411753726 (= E|Z| + regret there).
  CHECK(expected_cost(m, p, vec1(1.0), spec) ==
        doctest::Approx(1.1666309411753726).epsilon(1e-12));
  // v0'(omega) = (h+b) F(omega) - b = 2 Phi(1) - 1.
  const CostDerivs d = expected_cost_derivs(m, p, vec1(1.0), spec);
  CHECK(d.value == doctest::Approx(1.1666309411753726).epsilon(1e-12));
  CHECK(d.grad(0) == doctest::Approx(0.6826894921370859).epsilon(1e-11));
  // v0''(omega) = (h+b) f(omega) = 2 phi(1).
  CHECK(d.hess(0, 0) ==
        doctest::Approx(2.0 * norm_pdf(1.0)).epsilon(1e-9));
  CHECK(d.quad_converged);
}

TEST_CASE("expected cost under the bimodal mixture matches frozen values") {
  QuadSpec spec;
  const TrueDistribution p = bimodal_mix();
  const CostModel m = CostModel::newsvendor(vec1(1.0), vec1(3.0));
  // v0 at the true fractile decision and at the plug-in decision
  // Phi^{-1}(3/4); both frozen from an independent evaluation.
  CHECK(expected_cost(m, p, vec1(2.000079361411793), spec) ==
        doctest::Approx(2.7978988488062555).epsilon(1e-12));
  CHECK(expected_cost(m, p, vec1(0.6744897501960817), spec) ==
        doctest::Approx(3.4140416958548823).epsilon(1e-12));
}

TEST_CASE("portfolio expected cost via the gaussian mgf") {
  QuadSpec spec;
  // Under N(theta, 1): E exp(-omega Z) = exp(-omega theta + omega^2 / 2).
  // At theta=0, omega=1, gamma=0.5: e^{1/2} + 0.5 = 2.148721270700128.
  const TrueDistribution p = std_normal_law();
  const CostModel m = CostModel::portfolio(1, 0.5);
  CHECK(expected_cost(m, p, vec1(1.0), spec) ==
        doctest::Approx(2.148721270700128).epsilon(1e-12));
  const CostDerivs d = expected_cost_derivs(m, p, vec1(1.0), spec);
  // d/domega [e^{omega^2/2} + gamma omega^2] = omega e^{omega^2/2} + 2 gamma omega.
  CHECK(d.grad(0) ==
        doctest::Approx(std::exp(0.5) + 1.0).epsilon(1e-11));
  CHECK(d.hess(0, 0) ==
        doctest::Approx(2.0 * std::exp(0.5) + 1.0).epsilon(1e-9));
}

TEST_CASE("expected cost over atoms is an exact sum") {
  QuadSpec spec;
  Mat rows(2, 1);
  rows << 0.0, 1.0;
  const TrueDistribution emp = TrueDistribution::empirical(rows);
  const CostModel m = CostModel::newsvendor(vec1(2.0), vec1(4.0));
  // At omega = 0.5: 0.5 * h * 0.5 + 0.5 * b * 0.5 = 0.5 + 1.0.
  CHECK(expected_cost(m, emp, vec1(0.5), spec) ==
        doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("gradient moments match closed forms at the fractile") {
  QuadSpec spec;
  const TrueDistribution p = bimodal_mix();
  const CostModel m = CostModel::newsvendor(vec1(1.0), vec1(3.0));
  // At the true fractile F(omega*) = 3/4 the expected gradient vanishes and
  // Var[h 1{z<w} - b 1{z>=w}] = E[g^2] = (1/4 + 27/4) - 0 ... = 3 exactly.
  const MomentPair mm = grad_cost_moments(m, p, vec1(2.000079361411793), spec);
  CHECK(mm.mean(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(mm.cov(0, 0) == doctest::Approx(3.0).epsilon(1e-10));

  // Same variance under N(0,1) at its own 3/4-fractile (frozen tilde value).
  const TrueDistribution g = std_normal_law();
  const MomentPair gm = grad_cost_moments(m, g, vec1(0.6744897501960817), spec);
  CHECK(gm.cov(0, 0) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("cost model validation") {
  CHECK_THROWS_AS(CostModel::newsvendor(vec1(-1.0), vec1(1.0)), DomainError);
  CHECK_THROWS_AS(CostModel::newsvendor(vec1(1.0), Vec::Zero(2)), DomainError);
  CHECK_THROWS_AS(CostModel::portfolio(1, -0.1), DomainError);
  CHECK_THROWS_AS(CostModel::portfolio(0, 0.5), DomainError);
  // Newsvendor strong convexity must be declared by the user.
  const CostModel m = CostModel::newsvendor(vec1(1.0), vec1(1.0));
  CHECK_THROWS_AS(m.strong_convexity(), DomainError);
  CostModel declared = m;
  declared.curvature = 0.25;
  CHECK(declared.strong_convexity() == 0.25);
}

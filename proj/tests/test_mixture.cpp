#include <doctest.h>

#include <cmath>
#include <vector>

#include "regret/asymptotics.hpp"
#include "regret/errors.hpp"
#include "regret/linalg.hpp"
#include "regret/rng.hpp"
#include "regret/special.hpp"

using namespace regret;

TEST_CASE("single-weight mixture reproduces the chi-square(1) tail") {
  ChiSqMixture mix;
  mix.weights = {1.0};
  const MixtureTail tail(mix);
  // P(chi2_1 >= 3.841458820694124) = 0.05; Monte Carlo SE at 1e6 draws is
  // sqrt(.05*.95/1e6) ~ 2.2e-4, so 3 SE is under 1e-3.
  CHECK(std::fabs(tail.tail(3.841458820694124) - 0.05) < 1e-3);
  CHECK(std::fabs(tail.cdf(1.0) - 0.6826894921370859) <
        3.0 * tail.std_error(1.0) + 1e-12);
  // Everything is nonnegative, so the tail at 0 is exactly 1.
  CHECK(tail.tail(0.0) == 1.0);
  CHECK(tail.tail(-5.0) == 1.0);
  CHECK(tail.tail(1e9) == 0.0);
  CHECK(tail.std_error(3.841458820694124) ==
        doctest::Approx(2.2e-4).epsilon(0.3));
}

TEST_CASE("equal-weight pair is an exponential in disguise") {
  // 0.5(z1^2 + z2^2) ~ Exp(1): P(G >= 1) = 1/e.
  ChiSqMixture mix;
  mix.weights = {0.5, 0.5};
  const MixtureTail tail(mix);
  CHECK(std::fabs(tail.tail(1.0) - 0.36787944117144233) < 1.6e-3);
}

TEST_CASE("quantile and tail round trip within monte carlo error") {
  ChiSqMixture mix;
  mix.weights = {0.7, 0.2};
  const MixtureTail tail(mix);
  for (double p : {0.5, 0.9, 0.99}) {
    const double x = tail.quantile(p);
    const double se = std::sqrt(p * (1.0 - p) / 1e6);
    CHECK(std::fabs(tail.cdf(x) - p) <= 3.0 * se + 1e-9);
  }
  CHECK_THROWS_AS(tail.quantile(0.0), DomainError);
  CHECK_THROWS_AS(tail.quantile(1.0), DomainError);
  // Quantiles are monotone.
  CHECK(tail.quantile(0.2) < tail.quantile(0.8));
}

TEST_CASE("memoized lookup returns a shared law per weight vector") {
  ChiSqMixture mix;
  mix.weights = {0.4, 0.1};
  const auto a = MixtureTail::get(mix);
  const auto b = MixtureTail::get(mix);
  CHECK(a.get() == b.get());  // same object, not a re-simulation
  ChiSqMixture other;
  other.weights = {0.4, 0.2};
  CHECK(MixtureTail::get(other).get() != a.get());
}

TEST_CASE("signed mixtures are accepted only when flagged") {
  ChiSqMixture bad;
  bad.weights = {1.0, -0.5};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(MixtureTail{bad}, DomainError);

  ChiSqMixture ok = bad;
  ok.signed_mixture = true;
  CHECK_NOTHROW(ok.validate());
  const MixtureTail tail(ok);
  // A signed quadratic form takes negative values with positive probability.
  CHECK(tail.tail(-1e9) == 1.0);
  CHECK(tail.cdf(0.0) > 0.01);
  CHECK(tail.cdf(0.0) < 0.99);

  ChiSqMixture empty;
  CHECK_THROWS_AS(empty.validate(), DomainError);
}

TEST_CASE("ks statistic: exact on a constructed sample, detects shifts") {
  // Sample = exact uniform grid quantiles: D_n is 1/(2n) for the midpoint
  // grid {(i+0.5)/n}.
  const int n = 1000;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = (i + 0.5) / n;
  const double d = ks_statistic(grid, [](double x) { return x; });
  CHECK(d == doctest::Approx(0.5 / n).epsilon(1e-9));

  // A shifted reference CDF is detected with the full shift size.
  const double shifted =
      ks_statistic(grid, [](double x) { return std::min(1.0, x + 0.2); });
  CHECK(shifted == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("quadratic-form law: monte carlo draws match the spectral mixture") {
  // G = z' A z with A = (1/2) M H M for the frozen 2x2 pair has the law
  // sum lambda_i chi2_1 with lambda the eigenvalues of A.
  Mat m(2, 2), h(2, 2);
  m << 1.0, 0.3, 0.3, 2.0;
  h << 1.5, -0.2, -0.2, 0.8;
  const Mat a = symmetrize(0.5 * m * h * m);

  ChiSqMixture mix;
  mix.weights = {1.6207454157840755, 0.6527545842159246};
  const auto law = MixtureTail::get(mix);

  RngStream rng(314159, 0);
  const int n = 100000;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) {
    Vec z(2);
    z << rng.next_normal(), rng.next_normal();
    draws[i] = z.dot(a * z);
  }
  const double d =
      ks_statistic(draws, [&](double x) { return law->cdf(x); });
  CHECK(d < 0.01);
}

TEST_CASE("dominance tests certify coupled ordered samples") {
  // Coupled scaled chi-squares: a = 0.4 z^2 <= b = 0.6 z^2 pointwise, which
  // gives first-order (hence second-order) dominance of a by b.
  RngStream rng(2718, 0);
  const int n = 100000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double z2 = std::pow(rng.next_normal(), 2);
    a[i] = 0.4 * z2;
    b[i] = 0.6 * z2;
  }
  const DominanceReport rep = dominance_tests(a, b, 0.01);
  CHECK(rep.first_ok);
  CHECK(rep.second_ok);
  CHECK(rep.first_violation <= 0.0 + 1e-12);
  CHECK(rep.second_violation <= 0.0 + 1e-12);

  // Reversed order must be flagged, with a violation far above tolerance.
  const DominanceReport bad = dominance_tests(b, a, 0.01);
  CHECK_FALSE(bad.first_ok);
  CHECK(bad.first_violation > 0.05);
  CHECK_FALSE(bad.second_ok);
}

TEST_CASE("dominance tests tolerate statistical noise on equal laws") {
  // Independent samples from the same law cross within noise; the tolerance
  // absorbs it.
  RngStream rng(556, 1);
  const int n = 20000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) a[i] = std::pow(rng.next_normal(), 2);
  for (int i = 0; i < n; ++i) b[i] = std::pow(rng.next_normal(), 2);
  const DominanceReport rep = dominance_tests(a, b, 0.05);
  CHECK(rep.first_ok);
  CHECK(rep.first_violation < 0.05);
}

TEST_CASE("crossing laws fail second-order dominance") {
  // b has smaller mean than a => E(a) > E(b) breaks the increasing-convex
  // order at the far right end.
  RngStream rng(9090, 2);
  const int n = 50000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double z2 = std::pow(rng.next_normal(), 2);
    a[i] = z2;
    b[i] = 0.5 * z2;
  }
  const DominanceReport rep = dominance_tests(a, b, 0.01);
  CHECK_FALSE(rep.second_ok);
}

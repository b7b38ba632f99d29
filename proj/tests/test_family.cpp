#include <doctest.h>

#include <cmath>
#include <limits>

#include "regret/errors.hpp"
#include "regret/family.hpp"
#include "regret/rng.hpp"

using namespace regret;

namespace {

ParamFamily std_gaussian_1d() {
  Mat cov(1, 1);
  cov << 1.0;
  return ParamFamily::gaussian_location(cov);
}

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("gaussian log density, score, and hessian in closed form") {
  const ParamFamily fam = std_gaussian_1d();
  CHECK(fam.param_dim() == 1);
  CHECK(fam.data_dim() == 1);
  // log phi(0) = -0.5 log(2 pi), frozen reference value.
  CHECK(fam.log_density(vec1(0.0), vec1(0.0)) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-15));
  // score = Sigma^{-1}(z - theta); here z - theta.
  CHECK(fam.score(vec1(0.5), vec1(2.0))(0) ==
        doctest::Approx(1.5).epsilon(1e-14));
  // hessian = -Sigma^{-1}, constant in z.
  CHECK(fam.log_density_hessian(vec1(0.3), vec1(-1.0))(0, 0) ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("score matches a finite-difference gradient of the log density") {
  Mat cov(2, 2);
  cov << 2.0, 0.4, 0.4, 1.0;
  const ParamFamily fam = ParamFamily::gaussian_full_mean(cov);
  Vec theta(2), z(2);
  theta << 0.3, -0.7;
  z << 1.2, 0.5;
  const Vec s = fam.score(theta, z);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Vec tp = theta, tm = theta;
    tp(i) += h;
    tm(i) -= h;
    const double fd =
        (fam.log_density(tp, z) - fam.log_density(tm, z)) / (2.0 * h);
    CHECK(std::fabs(s(i) - fd) / std::max(1.0, std::fabs(fd)) < 1e-6);
  }
}

TEST_CASE("gaussian theta box is enforced") {
  ParamFamily fam = std_gaussian_1d();
  fam.set_theta_box(vec1(-2.0), vec1(2.0));
  CHECK_NOTHROW(fam.validate_theta(vec1(1.5)));
  CHECK_THROWS_AS(fam.validate_theta(vec1(2.5)), DomainError);
  CHECK_THROWS_AS(fam.validate_theta(Vec::Zero(3)), DomainError);
  CHECK(fam.theta_interior(vec1(0.0)));
  CHECK_FALSE(fam.theta_interior(vec1(2.0)));
}

TEST_CASE("finite discrete family: densities, simplex, boundary") {
  Mat support(2, 1);
  support << 0.0, 1.0;
  const ParamFamily fam = ParamFamily::finite_discrete(support);
  CHECK(fam.param_dim() == 2);

  Vec theta(2);
  theta << 0.5, 0.5;
  CHECK(fam.log_density(theta, vec1(0.0)) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-15));
  // Probability-zero atom has log density -inf.
  Vec corner(2);
  corner << 1.0, 0.0;
  CHECK(fam.log_density(corner, vec1(1.0)) ==
        -std::numeric_limits<double>::infinity());
  // Off-support points are a hard error.
  CHECK_THROWS_AS(fam.log_density(theta, vec1(0.5)), DomainError);
  // Simplex validation.
  Vec bad(2);
  bad << 0.7, 0.5;
  CHECK_THROWS_AS(fam.validate_theta(bad), DomainError);
  CHECK_FALSE(fam.theta_interior(corner));
  CHECK(fam.theta_interior(theta));
  CHECK(fam.atom_index(vec1(1.0)) == 1);
  CHECK_THROWS_AS(fam.atom_index(vec1(0.25)), DomainError);

  // Score of the interior simplex point: d/dtheta_k sum 1{z=z_k} log theta_k.
  const Vec s = fam.score(theta, vec1(1.0));
  CHECK(s(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s(1) == doctest::Approx(2.0).epsilon(1e-14));

  // Degenerate parameter samples only its atom.
  RngStream rng(7, 0);
  const Mat draws = fam.sample(corner, 5, rng);
  for (int i = 0; i < 5; ++i) CHECK(draws(i, 0) == 0.0);
}

TEST_CASE("total variation distance and lipschitz constants") {
  const ParamFamily fam = std_gaussian_1d();
  // TV(N(0,1), N(2,1)) = 2 Phi(1) - 1, frozen reference value.
  CHECK(fam.tv_distance(vec1(0.0), vec1(2.0)) ==
        doctest::Approx(0.6826894921370859).epsilon(1e-12));
  CHECK(fam.tv_distance(vec1(0.7), vec1(0.7)) == doctest::Approx(0.0));
  // Location family on N(., 1): the TV map is phi(0)-Lipschitz.
  CHECK(fam.tv_lipschitz() ==
        doctest::Approx(0.3989422804014327).epsilon(1e-10));

  Mat support(2, 1);
  support << 0.0, 1.0;
  const ParamFamily disc = ParamFamily::finite_discrete(support);
  Vec a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  CHECK(disc.tv_distance(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  // TV = (1/2) l1 <= (1/2) sqrt(q) l2.
  CHECK(disc.tv_lipschitz() ==
        doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sampling matches the parameter's moments") {
  Mat cov(2, 2);
  cov << 1.0, 0.3, 0.3, 2.0;
  const ParamFamily fam = ParamFamily::gaussian_full_mean(cov);
  Vec theta(2);
  theta << 1.0, -2.0;
  RngStream rng(20240915, 0);
  const int n = 20000;
  const Mat draws = fam.sample(theta, n, rng);
  REQUIRE(draws.rows() == n);
  REQUIRE(draws.cols() == 2);
  const Vec mean = draws.colwise().mean();
  // sd of the sample mean is sqrt(Sigma_ii/n) <= 0.01; allow 4 sigma.
  CHECK(std::fabs(mean(0) - 1.0) < 0.04);
  CHECK(std::fabs(mean(1) + 2.0) < 0.057);
  const Mat centered = draws.rowwise() - mean.transpose();
  const Mat s = centered.transpose() * centered / static_cast<double>(n);
  CHECK(std::fabs(s(0, 1) - 0.3) < 0.05);
  CHECK(std::fabs(s(1, 1) - 2.0) < 0.1);
}

TEST_CASE("family kind names round trip") {
  CHECK(family_kind_from_name(family_kind_name(FamilyKind::gaussian_location)) ==
        FamilyKind::gaussian_location);
  CHECK(family_kind_from_name(family_kind_name(FamilyKind::finite_discrete)) ==
        FamilyKind::finite_discrete);
  CHECK_THROWS_AS(family_kind_from_name("no-such-family"), ConfigError);
}

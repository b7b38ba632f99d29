#include <doctest.h>

#include <cmath>
#include <memory>

#include "regret/errors.hpp"
#include "regret/estimators.hpp"
#include "regret/rng.hpp"
#include "regret/special.hpp"

using namespace regret;

namespace {

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

Instance gaussian_newsvendor(double h, double b, double smoothing = 0.0) {
  Mat cov(1, 1);
  cov << 1.0;
  Instance inst;
  inst.family = std::make_shared<const ParamFamily>(
      ParamFamily::gaussian_location(cov));
  inst.truth = TrueDistribution::in_family(inst.family, vec1(0.0));
  inst.cost = CostModel::newsvendor(vec1(h), vec1(b), smoothing);
  return inst;
}

Mat column(std::initializer_list<double> xs) {
  Mat m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST_CASE("maximum likelihood is the sample mean for gaussian families") {
  const Instance inst = gaussian_newsvendor(1.0, 1.0);
  const Mat data = column({1.0, 2.0, 3.0, 6.0});
  const FitResult fit = fit_eto(inst, data, 17);
  CHECK(fit.method == "mle");
  CHECK(fit.theta_hat(0) == 3.0);  // exact arithmetic on small integers
  // Plug-in decision: theta + Phi^{-1}(1/2) sigma = theta.
  CHECK(fit.omega_hat(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.n == 4);
  CHECK(fit.stream_index == 17);
  CHECK(fit.converged);
  // Objective is the average negative log-likelihood at the MLE.
  const double nll = fit.objective;
  const double var_hat = ((data.array() - 3.0).square().sum()) / 4.0;
  CHECK(nll == doctest::Approx(0.9189385332046727 + 0.5 * var_hat)
                   .epsilon(1e-12));
}

TEST_CASE("maximum likelihood for the discrete family is the frequency vector") {
  Mat support(2, 1);
  support << 0.0, 1.0;
  Instance inst;
  inst.family = std::make_shared<const ParamFamily>(
      ParamFamily::finite_discrete(support));
  Vec theta0(2);
  theta0 << 0.5, 0.5;
  inst.truth = TrueDistribution::in_family(inst.family, theta0);
  inst.cost = CostModel::newsvendor(vec1(1.0), vec1(1.0));

  const Mat mixed = column({0.0, 1.0, 1.0, 1.0});
  const FitResult fit = fit_eto(inst, mixed, 0);
  CHECK(fit.theta_hat(0) == 0.25);
  CHECK(fit.theta_hat(1) == 0.75);

  // Every observation on the first atom: the boundary estimate (1, 0).
  const Mat all_zero = column({0.0, 0.0, 0.0});
  const FitResult corner = fit_eto(inst, all_zero, 0);
  CHECK(corner.theta_hat(0) == 1.0);
  CHECK(corner.theta_hat(1) == 0.0);
  CHECK(corner.omega_hat(0) == 0.0);  // degenerate law orders its only atom
}

TEST_CASE("ieo fractile path picks the sample fractile minus the offset") {
  // h=1, b=3: tau = 3/4.  n=5 makes n*tau = 3.75 non-integral, so the
  // minimizer is the ceil(3.75) = 4th order statistic; the oracle offset is
  // Phi^{-1}(3/4).
  const Instance inst = gaussian_newsvendor(1.0, 3.0);
  const Mat data = column({5.0, 1.0, 4.0, 2.0, 3.0});
  const FitResult fit = fit_ieo(inst, data, 3);
  CHECK(fit.method == "ieo-fractile");
  CHECK(fit.theta_hat(0) ==
        doctest::Approx(4.0 - 0.6744897501960817).epsilon(1e-14));
  // The plug-in decision lands exactly on the order statistic.
  CHECK(fit.omega_hat(0) == doctest::Approx(4.0).epsilon(1e-13));
  // The reported objective is the empirical decision cost at theta_hat.
  CHECK(fit.objective ==
        doctest::Approx(empirical_ieo_loss(inst, data, fit.theta_hat))
            .epsilon(1e-14));
}

TEST_CASE("ieo tie case clamps the mle into the flat minimizing interval") {
  // h=b=1: tau = 1/2, n=4 gives n*tau = 2 exactly; every omega in
  // [z_(2), z_(3)] = [1, 2] is an empirical minimizer.  The MLE mean 13/4
  // lies above, so it clamps to 2.
  const Instance inst = gaussian_newsvendor(1.0, 1.0);
  const Mat data = column({0.0, 1.0, 2.0, 10.0});
  const FitResult fit = fit_ieo(inst, data, 0);
  CHECK(fit.theta_hat(0) == 2.0);
  // Interior tie: a dataset whose mean falls inside the interval keeps the
  // MLE itself (the efficient choice among the minimizers).
  const Mat centered = column({0.0, 1.0, 2.0, 3.0});
  const FitResult keep = fit_ieo(inst, centered, 0);
  CHECK(keep.theta_hat(0) == 1.5);
  // Flatness of the empirical objective across the interval.
  CHECK(empirical_ieo_loss(inst, data, vec1(1.0)) ==
        doctest::Approx(empirical_ieo_loss(inst, data, vec1(2.0)))
            .epsilon(1e-14));
}

TEST_CASE("ieo fractile beats or ties every candidate on a fine grid") {
  const Instance inst = gaussian_newsvendor(2.0, 5.0);
  RngStream rng(123, 0);
  const Mat data = inst.truth.draw(41, rng);
  const FitResult fit = fit_ieo(inst, data, 0);
  const double best = empirical_ieo_loss(inst, data, fit.theta_hat);
  for (double t = -3.0; t <= 3.0; t += 0.01) {
    CHECK(best <= empirical_ieo_loss(inst, data, vec1(t)) + 1e-12);
  }
}

TEST_CASE("smoothed ieo solves the smooth empirical problem by bfgs") {
  const Instance inst = gaussian_newsvendor(1.0, 3.0, 0.05);
  RngStream rng(2024, 1);
  const Mat data = inst.truth.draw(200, rng);
  const FitResult fit = fit_ieo(inst, data, 1);
  CHECK(fit.method == "ieo-bfgs");
  CHECK(fit.converged);
  // No grid point does materially better than the BFGS solution.
  const double best = empirical_ieo_loss(inst, data, fit.theta_hat);
  for (double t = -2.0; t <= 2.0; t += 0.01) {
    CHECK(best <= empirical_ieo_loss(inst, data, vec1(t)) + 1e-8);
  }
  // And it improves on the plain MLE plug-in.
  const Vec mle = data.colwise().mean().transpose();
  CHECK(best <= empirical_ieo_loss(inst, data, mle) + 1e-12);
}

TEST_CASE("portfolio ieo fits through the oracle jacobian chain") {
  Mat cov(1, 1);
  cov << 1.0;
  Instance inst;
  inst.family = std::make_shared<const ParamFamily>(
      ParamFamily::gaussian_location(cov));
  inst.truth = TrueDistribution::in_family(inst.family, vec1(0.5));
  inst.cost = CostModel::portfolio(1, 0.5);
  RngStream rng(77, 0);
  const Mat data = inst.truth.draw(150, rng);
  const FitResult fit = fit_ieo(inst, data, 0);
  CHECK(fit.method == "ieo-bfgs");
  CHECK(fit.converged);
  const double best = empirical_ieo_loss(inst, data, fit.theta_hat);
  for (double t = -1.0; t <= 2.0; t += 0.02) {
    CHECK(best <= empirical_ieo_loss(inst, data, vec1(t)) + 1e-8);
  }
}

TEST_CASE("both pipelines hash the same dataset identically") {
  const Instance inst = gaussian_newsvendor(1.0, 3.0);
  RngStream rng(55, 9);
  const Mat data = inst.truth.draw(64, rng);
  const FitResult eto = fit_eto(inst, data, 9);
  const FitResult ieo = fit_ieo(inst, data, 9);
  CHECK(eto.data_hash == ieo.data_hash);
  CHECK(eto.data_hash == dataset_hash(data));
  // A one-entry change moves the hash.
  Mat other = data;
  other(0, 0) += 1e-12;
  CHECK(dataset_hash(other) != eto.data_hash);
}

TEST_CASE("ieo over the probability simplex is explicitly unsupported") {
  Mat support(2, 1);
  support << 0.0, 1.0;
  Instance inst;
  inst.family = std::make_shared<const ParamFamily>(
      ParamFamily::finite_discrete(support));
  Vec theta0(2);
  theta0 << 0.5, 0.5;
  inst.truth = TrueDistribution::in_family(inst.family, theta0);
  inst.cost = CostModel::newsvendor(vec1(1.0), vec1(1.0));
  const Mat data = column({0.0, 1.0, 1.0});
  CHECK_THROWS_AS(fit_ieo(inst, data, 0), NotImplementedError);
}

TEST_CASE("fits reject malformed data") {
  const Instance inst = gaussian_newsvendor(1.0, 1.0);
  CHECK_THROWS_AS(fit_eto(inst, Mat(0, 1), 0), DomainError);
  CHECK_THROWS_AS(fit_eto(inst, Mat::Zero(5, 2), 0), DomainError);
  CHECK_THROWS_AS(fit_ieo(inst, Mat(0, 1), 0), DomainError);
}

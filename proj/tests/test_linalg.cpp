#include <doctest.h>

#include <cmath>

#include "regret/errors.hpp"
#include "regret/linalg.hpp"

using namespace regret;

TEST_CASE("sym_eigs sorts ascending and matches a hand 2x2") {
  Mat a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1 and 3
  const Vec e = sym_eigs(a);
  CHECK(e(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e(1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(min_eig_sym(a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_eig_sym(a) == doctest::Approx(3.0).epsilon(1e-14));
  Mat s(2, 2);
  s << -5.0, 0.0, 0.0, 2.0;
  CHECK(op_norm_sym(s) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("sym_sqrt recovers the square root of an SPD matrix") {
  Mat m(2, 2);
  m << 2.0, 0.5, 0.5, 1.0;  // SPD
  const Mat a = m * m;      // symmetric by construction
  const Mat r = sym_sqrt(a);
  CHECK((r - m).norm() < 1e-12);
}

TEST_CASE("sym_sqrt clamps tiny negative eigenvalues and rejects real ones") {
  Mat tiny(1, 1);
  tiny << -1e-11;  // within the clamp band
  const Mat r = sym_sqrt(tiny);
  CHECK(r(0, 0) == 0.0);

  Mat bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1e-3;  // genuinely indefinite
  CHECK_THROWS_AS(sym_sqrt(bad), ConditioningError);
}

TEST_CASE("solve_spd solves SPD systems and rejects indefinite ones") {
  Mat a(2, 2);
  a << 4.0, 1.0, 1.0, 3.0;
  Vec b(2);
  b << 1.0, 2.0;
  const Vec x = solve_spd(a, b);
  CHECK((a * x - b).norm() < 1e-12);

  const Mat id = Mat::Identity(2, 2);
  const Mat inv = solve_spd(a, id);
  CHECK((a * inv - id).norm() < 1e-12);

  Mat indef(2, 2);
  indef << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(solve_spd(indef, b), ConditioningError);
  Mat zero = Mat::Zero(2, 2);
  CHECK_THROWS_AS(solve_spd(zero, b), ConditioningError);
}

TEST_CASE("row-major round trip and symmetrize") {
  Mat a(2, 3);
  a << 1, 2, 3, 4, 5, 6;
  const auto flat = to_row_major(a);
  REQUIRE(flat.size() == 6);
  CHECK(flat[1] == 2.0);
  CHECK(flat[3] == 4.0);
  const Mat back = from_row_major(flat, 2, 3);
  CHECK((back - a).norm() == 0.0);

  Mat asym(2, 2);
  asym << 0.0, 1.0, 3.0, 0.0;
  const Mat s = symmetrize(asym);
  CHECK(s(0, 1) == 2.0);
  CHECK(s(1, 0) == 2.0);
}

TEST_CASE("half-sandwich quadratic form spectrum on a fixed 2x2 pair") {
  // Reference pair: M = [[1,.3],[.3,2]], H = [[1.5,-.2],[-.2,.8]].  The
  // eigenvalues of (1/2) M H M were frozen from an independent evaluation.
  Mat m(2, 2), h(2, 2);
  m << 1.0, 0.3, 0.3, 2.0;
  h << 1.5, -0.2, -0.2, 0.8;
  const Mat q = symmetrize(0.5 * m * h * m);
  const Vec e = sym_eigs(q);
  CHECK(e(0) == doctest::Approx(0.6527545842159246).epsilon(1e-12));
  CHECK(e(1) == doctest::Approx(1.6207454157840755).epsilon(1e-12));
}

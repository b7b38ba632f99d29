#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "regret/rng.hpp"
#include "regret/special.hpp"

using namespace regret;

TEST_CASE("identical (seed, stream) pairs reproduce the same sequence") {
  RngStream a(20240915, 7);
  RngStream b(20240915, 7);
  for (int i = 0; i < 256; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("adjacent streams are not shifted copies of each other") {
  RngStream s0(42, 0);
  RngStream s1(42, 1);
  std::vector<std::uint64_t> seq0(64), seq1(64);
  for (auto& v : seq0) v = s0.next_u64();
  for (auto& v : seq1) v = s1.next_u64();
  CHECK(seq0 != seq1);
  // A lagged copy would show up as seq1[i] == seq0[i+1]; rule that out too.
  bool lagged = true;
  for (std::size_t i = 0; i + 1 < seq0.size(); ++i) {
    if (seq1[i] != seq0[i + 1]) {
      lagged = false;
      break;
    }
  }
  CHECK_FALSE(lagged);
}

TEST_CASE("uniforms live strictly inside (0,1) with the right moments") {
  RngStream s(1234, 3);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // E[u] = 1/2 with sd 1/sqrt(12 n) ~ 9.1e-4; allow 4 sigma.
  CHECK(std::fabs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::fabs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal draws are the monotone inverse-cdf image of the uniforms") {
  RngStream u_stream(99, 5);
  RngStream z_stream(99, 5);
  for (int i = 0; i < 100; ++i) {
    const double u = u_stream.next_uniform();
    CHECK(z_stream.next_normal() == norm_quantile(u));
  }
}

TEST_CASE("normal draws have standard moments") {
  RngStream s(777, 0);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("next_index stays in range and covers small supports") {
  RngStream s(5, 11);
  bool seen[4] = {false, false, false, false};
  for (int i = 0; i < 4000; ++i) {
    const std::size_t k = s.next_index(4);
    REQUIRE(k < 4);
    seen[k] = true;
  }
  CHECK(seen[0]);
  CHECK(seen[1]);
  CHECK(seen[2]);
  CHECK(seen[3]);
  for (int i = 0; i < 100; ++i) CHECK(s.next_index(1) == 0);
}

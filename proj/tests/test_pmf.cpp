#include <cmath>
#include <random>

#include "doctest.h"
#include "poissonk/error.hpp"
#include "poissonk/exact_oracle.hpp"
#include "poissonk/pmf.hpp"

using namespace poissonk;

namespace {

Real rel(Real got, Real want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST_CASE("params validation") {
  CHECK(Params(3, 0.5L).kappa() == 6);
  CHECK(Params(1, 2).kappa() == 1);
  CHECK(Params(2, 4.0L / 3).mean() == doctest::Approx(4.0));
  CHECK_THROWS_AS(Params(0, 1), InvalidArgument);
  CHECK_THROWS_AS(Params(2, 0), InvalidArgument);
  CHECK_THROWS_AS(Params(2, -1), InvalidArgument);
  CHECK_THROWS_AS(Params(2, NAN), InvalidArgument);
  CHECK_THROWS_AS(Params(2, INFINITY), InvalidArgument);
}

TEST_CASE("build_table: standard Poisson at k = 1") {
  const PmfTable t = build_table(Params(1, 1), 3);
  REQUIRE(t.n_max() == 3);
  CHECK(t[0] == 1);
  CHECK(t[1] == 1);
  CHECK(t[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t[3] == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("build_table: h_k(2; lambda) = lambda^2/2 + lambda") {
  CHECK(build_table(Params(2, 1), 2)[2] == doctest::Approx(1.5).epsilon(1e-15));
  for (int k = 2; k <= 8; ++k) {
    const Real lambda = 0.37L;
    CHECK(rel(build_table(Params(k, lambda), 2)[2], lambda * lambda / 2 + lambda) <= 1e-17L);
  }
}

TEST_CASE("build_table matches the tuple-sum oracle") {
  const PmfTable t = build_table(Params(3, 0.5L), 9);
  for (int n = 0; n <= 9; ++n) {
    const Real want = oracle::to_real(oracle::h_exact(3, n, oracle::to_rational(0.5L)));
    CHECK(rel(t[static_cast<std::size_t>(n)], want) <= 1e-12L);
  }
}

TEST_CASE("build_table_km cases") {
  CHECK(build_table_km(Params(2, 1), 2)[2] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(build_table_km(Params(1, 2), 4)[4] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  const Params params(4, 0.6026076L);
  const PmfTable kp = build_table(params, 12);
  const PmfTable km = build_table_km(params, 12);
  for (std::size_t n = 0; n <= 12; ++n) CHECK(rel(kp[n], km[n]) <= 1e-10L);
}

TEST_CASE("both recurrences agree on random parameters, deep into the tail") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> kd(1, 12);
  std::uniform_real_distribution<double> ld(-2.5, 1.5);  // log10 lambda
  for (int trial = 0; trial < 25; ++trial) {
    const Params params(kd(rng), static_cast<Real>(std::pow(10.0, ld(rng))));
    CAPTURE(params.k());
    CAPTURE(static_cast<double>(params.lambda()));
    const PmfTable kp = build_table(params, 150);
    const PmfTable km = build_table_km(params, 150);
    for (std::size_t n = 0; n <= 150; ++n) CHECK(rel(kp[n], km[n]) <= 1e-10L);
  }
}

TEST_CASE("table invariants on a grid") {
  for (int k = 1; k <= 12; ++k) {
    for (Real lambda : {0.001L, 0.05L, 0.6L, 1.0L, 3.0L, 9.0L}) {
      const PmfTable t = build_table(Params(k, lambda), 60);
      CHECK(t[0] == 1);
      CHECK(rel(t[1], lambda) <= 1e-14L);
      for (Real v : t.values()) CHECK(v > 0);
      for (int n = 2; n <= k; ++n) CHECK(t[static_cast<std::size_t>(n - 1)] < t[static_cast<std::size_t>(n)]);
    }
  }
}

TEST_CASE("normalize") {
  const PmfTable t = build_table(Params(1, 1), 10);
  const auto f = normalize(t);
  Real factorial = 1;
  for (std::size_t n = 0; n <= 10; ++n) {
    if (n > 0) factorial *= static_cast<Real>(n);
    CHECK(rel(f[n], std::exp(-1.0L) / factorial) <= 1e-17L);
  }
  CHECK(rel(normalize(build_table(Params(2, 1), 3))[0], std::exp(-2.0L)) <= 1e-18L);

  const PmfTable a = build_adaptive_table(Params(2, 4.0L / 3), 1e-10L);
  Real sum = 0;
  for (Real v : normalize(a)) {
    CHECK(v > 0);
    CHECK(v < 1);
    sum += v;
  }
  CHECK(sum >= 1 - 1e-10L);
  CHECK(std::fabs(sum - a.mass_captured()) <= 1e-15L);
}

TEST_CASE("adaptive truncation: standard Poisson against its cumulative mass") {
  const Real epsilon = 1e-10L;
  // Smallest n with P(X <= n) >= 1 - epsilon for X ~ Poisson(1), summed directly.
  std::size_t oracle_n = 0;
  Real term = std::exp(-1.0L);
  Real cumulative = term;
  while (cumulative < 1 - epsilon) {
    ++oracle_n;
    term /= static_cast<Real>(oracle_n);
    cumulative += term;
  }
  CHECK(oracle_n == 12);
  CHECK(adaptive_n_max(Params(1, 1), epsilon) == oracle_n);
}

TEST_CASE("adaptive truncation: postconditions") {
  const PmfTable fig3 = build_adaptive_table(Params(2, 4.0L / 3), 1e-10L);
  CHECK(fig3.n_max() >= 2);
  CHECK(fig3.tail_settled());
  CHECK(fig3.mass_captured() >= 1 - 1e-10L);

  const PmfTable small = build_adaptive_table(Params(5, 0.1L), 1e-12L);
  CHECK(small.mass_captured() >= 1 - 1e-12L);
  CHECK(small.n_max() >= 10);
  CHECK(small.tail_settled());

  // Tighter epsilon never gives a shorter table.
  CHECK(adaptive_n_max(Params(3, 1), 1e-14L) >= adaptive_n_max(Params(3, 1), 1e-6L));

  CHECK_THROWS_AS((void)adaptive_n_max(Params(2, 1), 0), InvalidArgument);
  CHECK_THROWS_AS((void)adaptive_n_max(Params(2, 1), 1), InvalidArgument);
  CHECK_THROWS_AS((void)adaptive_n_max(Params(1, 0.5L), 1e-30L), InvalidArgument);
  // p_n underflows to zero from n = 3, so the tail never becomes strictly decreasing.
  CHECK_THROWS_AS((void)adaptive_n_max(Params(2, 1e-3000L), 1e-12L), ComputationError);
}

TEST_CASE("tail_settled needs n_max >= 2k and a strictly decreasing final block") {
  CHECK_FALSE(build_table(Params(3, 0.01L), 5).tail_settled());
  CHECK(build_table(Params(3, 0.01L), 6).tail_settled());
  CHECK_FALSE(build_table(Params(2, 4.0L / 3), 4).tail_settled());
}

TEST_CASE("overflow is reported with the index") {
  try {
    (void)build_table(Params(1, 1e300L), 40);
    FAIL("expected overflow");
  } catch (const ComputationError& e) {
    CHECK(std::string(e.what()).find("overflows at n = ") != std::string::npos);
  }
}

TEST_CASE("at() range check") {
  const PmfTable t = build_table(Params(2, 1), 4);
  CHECK(t.at(4) == t[4]);
  CHECK_THROWS_AS((void)t.at(5), InvalidArgument);
  CHECK(t.at_or_zero(-1) == 0);
}

TEST_CASE("diff_forward") {
  const PmfTable t2 = build_table(Params(2, 1), 10);
  CHECK(diff_forward(t2, 2).abs_gap <= 1e-13L);

  const PmfTable t1 = build_table(Params(1, 1), 5);
  const auto r = diff_forward(t1, 1);
  CHECK(r.lhs == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(-0.5).epsilon(1e-15));

  const PmfTable t3 = build_table(Params(3, 0.2L), 10);
  CHECK(diff_forward(t3, 5).abs_gap <= 1e-13L);

  CHECK_THROWS_AS((void)diff_forward(t3, 2), InvalidArgument);
  CHECK_THROWS_AS((void)diff_forward(t3, 10), InvalidArgument);
}

TEST_CASE("diff_km") {
  CHECK(diff_km(build_table(Params(2, 1), 4), 2).abs_gap <= 1e-13L);
  CHECK(diff_km(build_table(Params(2, 0.5L), 4), 3).abs_gap <= 1e-13L);
  const auto r = diff_km(build_table(Params(1, 1), 4), 2);
  CHECK(r.lhs == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK_THROWS_AS((void)diff_km(build_table(Params(1, 1), 4), 1), InvalidArgument);
  CHECK_THROWS_AS((void)diff_km(build_table(Params(1, 1), 4), 5), InvalidArgument);
}

TEST_CASE("difference identities hold across a grid") {
  for (int k = 1; k <= 6; ++k) {
    for (Real lambda : {0.3L, 1.0L, 2.0L}) {
      const PmfTable t = build_table(Params(k, lambda), 80);
      for (std::size_t n = 2; n <= 80; ++n) CHECK(diff_km(t, n).abs_gap <= 1e-12L * std::max<Real>(1, t[n]));
      for (auto n = static_cast<std::size_t>(k); n < 80; ++n) {
        CHECK(diff_forward(t, n).abs_gap <= 1e-12L * std::max<Real>(1, t[n]));
      }
    }
  }
}

#include <cmath>

#include "doctest.h"
#include "poissonk/error.hpp"
#include "poissonk/exact_oracle.hpp"
#include "poissonk/pmf.hpp"
#include "poissonk/roots.hpp"

using namespace poissonk;

namespace {

const Real kSqrt3m1 = std::sqrt(3.0L) - 1;
const Real kSqrt5m1 = std::sqrt(5.0L) - 1;
const Real kQ2 = (std::sqrt(33.0L) - 3) / 2;

}  // namespace

TEST_CASE("n = 2 roots have the closed form sqrt(2c+1) - 1") {
  CHECK(std::fabs(solve_h_equals_c(2, 2, 1).root - kSqrt3m1) <= 1e-12L);
  for (int k : {2, 3, 5, 10, 40}) CHECK(std::fabs(solve_h_equals_c(k, 2, 2).root - kSqrt5m1) <= 1e-12L);
  for (int k : {2, 5, 10}) {
    for (Real c : {0.5L, 1.0L, 2.0L, 10.0L}) {
      CHECK(std::fabs(solve_h_equals_c(k, 2, c).root - closed_form_r_n2(c)) <= 1e-12L);
    }
  }
  CHECK(std::fabs(closed_form_r_n2(1) - kSqrt3m1) <= 1e-18L);
  CHECK(std::fabs(closed_form_r_n2(2) - kSqrt5m1) <= 1e-18L);
  CHECK(closed_form_r_n2(0) == 0);
  CHECK_THROWS_AS((void)closed_form_r_n2(-1), InvalidArgument);
}

TEST_CASE("r_3 solves lambda + lambda^2 + lambda^3/6 = 1") {
  const RootResult r = solve_h_equals_c(3, 3, 1);
  const mpq_class at_root = oracle::h_polynomial(3, 3).evaluate(oracle::to_rational(r.root));
  CHECK(std::fabs(oracle::to_real(at_root) - 1) <= 1e-13L);
  const Real x = r.root;
  CHECK(std::fabs(x + x * x + x * x * x / 6 - 1) <= 1e-13L);
}

TEST_CASE("RootResult invariants on a grid") {
  for (int k = 1; k <= 8; ++k) {
    for (int n = 1; n <= 12; ++n) {
      for (Real c : {0.1L, 1.0L, 2.0L, 50.0L}) {
        CAPTURE(k);
        CAPTURE(n);
        CAPTURE(static_cast<double>(c));
        const RootResult r = solve_h_equals_c(k, n, c);
        CHECK(r.bracket_low == 0);
        CHECK(r.root > 0);
        CHECK(r.root <= r.bracket_high);
        CHECK(std::fabs(h_value(k, n, r.root) - c) <= r.tol * std::max<Real>(1, c));
        const Real leading = std::exp((std::log(c) + std::lgamma(static_cast<Real>(n) + 1)) / n);
        CHECK(r.root <= leading * (1 + 1e-15L));
        if (n % k == 0) {
          const Real m = static_cast<Real>(n / k);
          CHECK(r.root <= std::exp((std::log(c) + std::lgamma(m + 1)) / m) * (1 + 1e-15L));
        }
        // Sampled strict increase across the bracket, so the sign change is unique.
        Real prev = 0;
        for (int i = 1; i <= 10; ++i) {
          const Real h = h_value(k, n, r.bracket_high * i / 11);
          CHECK(h > prev);
          prev = h;
        }
      }
    }
  }
}

TEST_CASE("solver rejects bad input") {
  CHECK_THROWS_AS((void)solve_h_equals_c(0, 2, 1), InvalidArgument);
  CHECK_THROWS_AS((void)solve_h_equals_c(2, 0, 1), InvalidArgument);
  CHECK_THROWS_AS((void)solve_h_equals_c(2, 2, 0), InvalidArgument);
  CHECK_THROWS_AS((void)solve_h_equals_c(2, 2, 1, 0), InvalidArgument);
}

TEST_CASE("upper_bound_r picks the tightest bound") {
  CHECK(std::fabs(upper_bound_r(3, 3, 1) - 2 / (std::sqrt(5.0L) + 1)) <= 1e-18L);
  CHECK(std::fabs(upper_bound_r(2, 4, 1) - std::sqrt(2.0L)) <= 1e-18L);
  CHECK(std::fabs(upper_bound_r(5, 5, 2) - 4 / (std::sqrt(17.0L) + 1)) <= 1e-18L);
  // Only the leading-term bound applies when k does not divide n.
  CHECK(std::fabs(upper_bound_r(3, 4, 1) - std::pow(24.0L, 0.25L)) <= 1e-17L);
  // Exact at k = 1 and k = 2.
  CHECK(std::fabs(upper_bound_r(1, 1, 3) - 3) <= 1e-18L);
  CHECK(std::fabs(upper_bound_r(2, 2, 1) - kSqrt3m1) <= 1e-18L);
}

TEST_CASE("q_k") {
  CHECK(std::fabs(q_k(2) - kQ2) <= 1e-18L);
  CHECK(std::fabs(q_k(2) - 1.3722813232690143L) <= 1e-15L);
  Real prev = q_k(2);
  for (int k = 3; k <= 100; ++k) {
    const Real q = q_k(k);
    CHECK(q < prev);
    CHECK(q > kSqrt5m1);
    prev = q;
  }
  CHECK(q_k(100000) - kSqrt5m1 < 1e-9L);
  CHECK(q_k(100000) > kSqrt5m1);
  CHECK_THROWS_AS((void)q_k(1), InvalidArgument);
}

TEST_CASE("lambda_monotone_bound") {
  CHECK(std::fabs(lambda_monotone_bound(2) - 0.125L) <= 1e-18L);
  CHECK(std::fabs(lambda_monotone_bound(3) - 6.0L / 216) <= 1e-18L);
  for (int k = 2; k <= 60; ++k) {
    const Real t_k = solve_h_equals_c(k, k, 2).root;
    CHECK(lambda_monotone_bound(k) <= t_k);
    CHECK(t_k <= 4 / (std::sqrt(4.0L * k - 3) + 1) * (1 + 1e-15L));
  }
  // k!/(2k)^k stays finite and positive long after the direct product overflows.
  CHECK(starting_block_factor(1000) > 0);
  CHECK(std::fabs(log_starting_block_factor(10000) - (std::lgamma(10001.0L) - 10000 * std::log(20000.0L))) <= 1e-12L);
  CHECK(std::fabs(std::log(starting_block_factor(10)) - (std::lgamma(11.0L) - 10 * std::log(20.0L))) <= 1e-15L);
  CHECK_THROWS_AS((void)lambda_monotone_bound(1), InvalidArgument);
}

TEST_CASE("shoulder root") {
  const Real s4 = shoulder_lambda(4);
  CHECK(std::fabs(s4 - 0.6026076L) <= 5e-7L);
  // Independent 40-digit evaluation of the same root.
  CHECK(std::fabs(s4 - 0.602607787331683077726L) <= 1e-12L);

  // For k = 2: lambda^2 + lambda^3/6 = lambda^2/2 + lambda^3/2 + lambda^4/24,
  // i.e. lambda^2 + 8 lambda - 12 = 0.
  const Real s2 = shoulder_lambda(2);
  CHECK(std::fabs(s2 - (2 * std::sqrt(7.0L) - 4)) <= 1e-12L);
  const mpq_class at = oracle::to_rational(s2);
  const Real h3 = oracle::to_real(oracle::h_polynomial(2, 3).evaluate(at));
  const Real h4 = oracle::to_real(oracle::h_polynomial(2, 4).evaluate(at));
  CHECK(std::fabs(h3 - h4) <= 1e-12L * h3);

  for (int k = 2; k <= 30; ++k) {
    const Real s = shoulder_lambda(k);
    const PmfTable at_s = build_table(Params(k, s), static_cast<std::size_t>(k) + 2);
    CHECK(std::fabs(at_s[k + 1] - at_s[k + 2]) <= 1e-12L * at_s[k + 1]);
    const PmfTable below = build_table(Params(k, s * (1 - 1e-6L)), static_cast<std::size_t>(k) + 2);
    CHECK(below[k + 1] > below[k + 2]);
  }
  CHECK_THROWS_AS((void)shoulder_lambda(1), InvalidArgument);
}

TEST_CASE("bounds records") {
  const BoundsRecord b1 = compute_bounds(1);
  CHECK(std::fabs(b1.r_k - 1) <= 1e-13L);
  CHECK(std::fabs(b1.t_k - 2) <= 1e-13L);
  CHECK_FALSE(b1.q_k.has_value());
  CHECK(b1.bounds_hold());

  const BoundsRecord b2 = compute_bounds(2);
  CHECK(std::fabs(b2.r_k - kSqrt3m1) <= 1e-12L);
  CHECK(std::fabs(b2.r_k_upper - kSqrt3m1) <= 1e-18L);
  CHECK(std::fabs(*b2.q_k - kQ2) <= 1e-18L);
  CHECK(std::fabs(*b2.lambda_monotone - 0.125L) <= 1e-18L);
  CHECK(b2.bounds_hold());

  for (int k = 3; k <= 40; ++k) {
    const BoundsRecord b = compute_bounds(k);
    CHECK(b.r_k < b.r_k_upper);
    CHECK(b.r_k < 1);
    CHECK(b.bounds_hold());
    CHECK(std::fabs(h_value(k, k, b.r_k) - 1) <= 1e-10L);
    CHECK(std::fabs(h_value(k, k, b.t_k) - 2) <= 1e-10L);
  }

  BoundsRecord broken = compute_bounds(3);
  broken.r_k = broken.r_k_upper * 1.01L;
  CHECK_FALSE(broken.bounds_hold());
}

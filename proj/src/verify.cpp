#include "poissonk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "poissonk/exact_oracle.hpp"
#include "poissonk/pmf.hpp"
#include "poissonk/roots.hpp"

namespace poissonk {
namespace {

void record(SuiteResult& suite, bool ok, std::string what) {
  ++suite.checks;
  if (!ok) {
    suite.passed = false;
    // Cap the listing; the count is in `checks`.
    if (suite.failures.size() < 50) suite.failures.push_back(std::move(what));
  }
}

SuiteResult make_suite(std::string name, std::string scope) {
  SuiteResult s;
  s.name = std::move(name);
  s.scope = std::move(scope);
  return s;
}

Real rel_error(Real got, Real want) {
  return std::fabs(got - want) / std::max(std::fabs(want), std::numeric_limits<Real>::min());
}

}  // namespace

SuiteResult verify_oracle_equivalence() {
  SuiteResult suite = make_suite("oracle-equivalence", "k<=5, n<=15");
  const Real lambdas[] = {0.25L, 0.5L, 1.0L, 2.0L};
  for (int k = 1; k <= 5; ++k) {
    for (Real lambda : lambdas) {
      const PmfTable table = build_table(Params(k, lambda), 15);
      for (int n = 0; n <= 15; ++n) {
        const Real want = oracle::to_real(oracle::h_exact(k, n, oracle::to_rational(lambda)));
        const Real got = table[static_cast<std::size_t>(n)];
        record(suite, rel_error(got, want) <= 1e-12L,
               fmt::format("(k={}, n={}, lambda={}): got {:.17g}, want {:.17g}", k, n, lambda, got, want));
      }
    }
  }
  return suite;
}

SuiteResult verify_recurrence_cross_check() {
  SuiteResult suite = make_suite("recurrence cross-check", "k<=10, n<=200");
  const Real lambdas[] = {0.1L, 0.6026076L, 4.0L / 3, 3.0L};
  for (int k = 1; k <= 10; ++k) {
    for (Real lambda : lambdas) {
      const Params params(k, lambda);
      const PmfTable kp = build_table(params, 200);
      const PmfTable km = build_table_km(params, 200);
      for (std::size_t n = 0; n <= 200; ++n) {
        record(suite, rel_error(kp[n], km[n]) <= 1e-10L,
               fmt::format("(k={}, n={}, lambda={}): got {:.17g}, want {:.17g}", k, n, lambda, kp[n], km[n]));
      }
    }
  }
  return suite;
}

SuiteResult verify_difference_identities() {
  SuiteResult suite = make_suite("difference identities", "k<=6, n<=100");
  const Real lambdas[] = {0.3L, 1.0L, 2.0L};
  for (int k = 1; k <= 6; ++k) {
    for (Real lambda : lambdas) {
      const PmfTable table = build_table(Params(k, lambda), 101);
      for (std::size_t n = 2; n <= 100; ++n) {
        const auto r = diff_km(table, n);
        record(suite, r.abs_gap <= 1e-12L * std::max<Real>(1, table[n]),
               fmt::format("km (k={}, n={}, lambda={}): got {:.17g}, want {:.17g}", k, n, lambda, r.rhs, r.lhs));
      }
      for (auto n = static_cast<std::size_t>(k); n <= 100; ++n) {
        const auto r = diff_forward(table, n);
        record(suite, r.abs_gap <= 1e-12L * std::max<Real>(1, table[n]),
               fmt::format("forward (k={}, n={}, lambda={}): got {:.17g}, want {:.17g}", k, n, lambda, r.rhs,
                           r.lhs));
      }
    }
  }
  return suite;
}

SuiteResult verify_closed_form_roots() {
  SuiteResult suite = make_suite("closed-form r_{k,2,c}", "k in {2,5,10}, c in {0.5,1,2,10}");
  for (int k : {2, 5, 10}) {
    for (Real c : {0.5L, 1.0L, 2.0L, 10.0L}) {
      const Real got = solve_h_equals_c(k, 2, c).root;
      const Real want = closed_form_r_n2(c);
      record(suite, std::fabs(got - want) <= 1e-12L,
             fmt::format("(k={}, c={}): got {:.17g}, want {:.17g}", k, c, got, want));
    }
  }
  return suite;
}

SuiteResult verify_lambda2_coefficients() {
  SuiteResult suite = make_suite("lambda^2 coefficients", "k<=12");
  for (int k = 2; k <= 12; ++k) {
    for (int j = 1; j <= k; ++j) {
      const mpq_class got = oracle::coeff_lambda2_at(k, j);
      mpq_class want(k + 1 - j, 2);
      want.canonicalize();
      record(suite, got == want, fmt::format("(k={}, j={}): got {}, want {}", k, j, got.get_str(), want.get_str()));
    }
  }
  return suite;
}

std::vector<SuiteResult> run_all_suites() {
  return {verify_oracle_equivalence(), verify_recurrence_cross_check(), verify_difference_identities(),
          verify_closed_form_roots(), verify_lambda2_coefficients()};
}

}  // namespace poissonk

#pragma once

#include <optional>

#include "poissonk/params.hpp"

namespace poissonk {

inline constexpr Real kDefaultRootTol = 1e-13L;

// Unique positive root of h_k(n; lambda) = c.
struct RootResult {
  int k;
  int n;
  Real c;
  Real root;
  Real bracket_low;   // always 0
  Real bracket_high;  // upper end of the initial bracket
  Real tol;
  int iterations;
};

// h_k(n; lambda) by the forward recurrence, for a single n.
[[nodiscard]] Real h_value(int k, int n, Real lambda);

// Bisection with secant steps on (0, upper_bound_r(k, n, c)], which is valid
// because lambda -> h_k(n; lambda) is strictly increasing from 0. Stops when
// the bracket is within tol relative and |h - c| <= tol * max(1, c).
// Throws InvalidArgument on bad input and ComputationError if the iteration
// cap is reached.
[[nodiscard]] RootResult solve_h_equals_c(int k, int n, Real c, Real tol = kDefaultRootTol);

// r_{k,2,c} = sqrt(2c + 1) - 1, exact for every k >= 2.
[[nodiscard]] Real closed_form_r_n2(Real c);

// Tightest of the a priori upper bounds on r_{k,n,c}:
//   (c n!)^{1/n}, from h >= lambda^n / n!;
//   (c (n/k)!)^{k/n} when k | n, from h >= lambda^{n/k} / (n/k)!;
//   2c / (sqrt(2c(k-1) + 1) + 1) when n = k, from h >= lambda + (k-1)/2 lambda^2.
[[nodiscard]] Real upper_bound_r(int k, int n, Real c);

// q_k = 4 / (sqrt(5 - 4/kappa) + 1); for lambda >= q_k, p_{k+1} >= p_k.
[[nodiscard]] Real q_k(int k);

// k! / (2k)^k, evaluated through lgamma. Underflows to 0 past k ~ 6700;
// the log form does not.
[[nodiscard]] Real starting_block_factor(int k);
[[nodiscard]] Real log_starting_block_factor(int k);

// min{t_k, k!/(2k)^k}: below this the tail p_k > p_{k+1} > ... is decreasing.
[[nodiscard]] Real lambda_monotone_bound(int k, Real tol = kDefaultRootTol);

// The empirical monotone-tail rate 2/(k+1), i.e. mean <= k.
[[nodiscard]] Real lambda_empirical_bound(int k);

// First lambda > 0 where p_{k+1} = p_{k+2}. Scans (0, 2] geometrically for
// the first sign change of p_{k+2}/p_{k+1} - 1 and then bisects.
// Throws ComputationError if no sign change is found on the scan.
inline constexpr Real kShoulderScanLow = 1e-6L;
inline constexpr Real kShoulderScanHigh = 2.0L;
[[nodiscard]] Real shoulder_lambda(int k, Real tol = kDefaultRootTol);

// All the thresholds for one k, with their closed-form upper bounds.
struct BoundsRecord {
  int k;
  Real r_k;
  Real r_k_upper;  // 2 / (sqrt(2k-1) + 1)
  Real t_k;
  Real t_k_upper;  // 4 / (sqrt(4k-3) + 1)
  std::optional<Real> q_k;               // k >= 2
  std::optional<Real> lambda_monotone;   // k >= 2
  std::optional<Real> lambda_empirical;  // k >= 2
  std::optional<Real> shoulder_lambda;   // k >= 2

  // The published inequalities hold for this record (r_k < r_k_upper
  // strictly for k >= 3, equal within tol for k <= 2; t_k <= t_k_upper;
  // sqrt(5)-1 < q_k <= (sqrt(33)-3)/2).
  [[nodiscard]] bool bounds_hold(Real tol = 1e-12L) const;
};

[[nodiscard]] BoundsRecord compute_bounds(int k, Real tol = kDefaultRootTol);

}  // namespace poissonk

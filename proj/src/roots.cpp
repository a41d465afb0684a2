#include "poissonk/roots.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "poissonk/error.hpp"

namespace poissonk {
namespace {

constexpr int kMaxIterations = 1000;
constexpr int kShoulderScanPoints = 512;

void check_tol(Real tol) {
  if (!(tol > 0) || !std::isfinite(tol)) {
    throw InvalidArgument(fmt::format("tolerance must be finite and > 0, got {}", tol));
  }
}

// Last two entries p_{n-1}, p_n of the forward recurrence.
std::pair<Real, Real> tail_pair(int k, int n, Real lambda) {
  std::vector<Real> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1;
  for (int i = 1; i <= n; ++i) {
    Real acc = 0;
    for (int j = 1; j <= std::min(k, i); ++j) acc += static_cast<Real>(j) * p[static_cast<std::size_t>(i - j)];
    p[static_cast<std::size_t>(i)] = lambda * acc / static_cast<Real>(i);
  }
  return {n >= 1 ? p[static_cast<std::size_t>(n - 1)] : Real{0}, p.back()};
}

struct Bracketed {
  Real root;
  int iterations;
};

// Root of an increasing f on [lo, hi] with f(lo) < 0 <= f(hi). Alternates
// secant and bisection steps so the bracket at least halves every two
// iterations.
template <typename F>
Bracketed bracketed_root(F&& f, Real lo, Real hi, Real f_lo, Real f_hi, Real tol, Real residual_tol) {
  for (int it = 1; it <= kMaxIterations; ++it) {
    Real x = lo + (hi - lo) / 2;
    if (it % 2 == 1 && f_hi != f_lo) {
      const Real secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (secant > lo && secant < hi) x = secant;
    }
    if (x <= lo || x >= hi) {
      // Bracket is down to adjacent representable values.
      return {std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi, it};
    }
    const Real fx = f(x);
    if (fx == 0) return {x, it};
    if (fx < 0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    const Real best = std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
    const Real best_f = std::min(std::fabs(f_lo), std::fabs(f_hi));
    if (hi - lo <= tol * hi && best_f <= residual_tol) return {best, it};
  }
  throw ComputationError(
      fmt::format("root search did not converge within {} iterations", kMaxIterations));
}

}  // namespace

Real h_value(int k, int n, Real lambda) {
  if (k < 1 || n < 0) throw InvalidArgument(fmt::format("h_value needs k >= 1, n >= 0; got k = {}, n = {}", k, n));
  return tail_pair(k, n, lambda).second;
}

RootResult solve_h_equals_c(int k, int n, Real c, Real tol) {
  if (k < 1 || n < 1) {
    throw InvalidArgument(fmt::format("solve_h_equals_c needs k >= 1 and n >= 1; got k = {}, n = {}", k, n));
  }
  if (!(c > 0) || !std::isfinite(c)) throw InvalidArgument(fmt::format("c must be finite and > 0, got {}", c));
  check_tol(tol);

  auto f = [&](Real lambda) { return h_value(k, n, lambda) - c; };
  Real hi = upper_bound_r(k, n, c);
  Real f_hi = f(hi);
  // Where the bound is exact (k <= 2) rounding can leave h(hi) a hair below c.
  for (Real widen = 1e-15L; f_hi < 0; widen *= 4) {
    if (widen > 1) throw ComputationError(fmt::format("no bracket for h_{}({}; .) = {}", k, n, c));
    hi *= 1 + widen;
    f_hi = f(hi);
  }
  const Real bracket_high = hi;
  const Real residual_tol = tol * std::max<Real>(1, c);
  Bracketed r{hi, 0};
  if (f_hi != 0) r = bracketed_root(f, Real{0}, hi, -c, f_hi, tol, residual_tol);
  return {k, n, c, r.root, Real{0}, bracket_high, tol, r.iterations};
}

Real closed_form_r_n2(Real c) {
  if (!(c >= 0) || !std::isfinite(c)) throw InvalidArgument(fmt::format("c must be finite and >= 0, got {}", c));
  // sqrt(2c+1) - 1 rewritten without cancellation.
  return 2 * c / (std::sqrt(2 * c + 1) + 1);
}

Real upper_bound_r(int k, int n, Real c) {
  if (k < 1 || n < 1) throw InvalidArgument(fmt::format("upper_bound_r needs k >= 1 and n >= 1; got k = {}, n = {}", k, n));
  if (!(c > 0) || !std::isfinite(c)) throw InvalidArgument(fmt::format("c must be finite and > 0, got {}", c));
  const Real log_c = std::log(c);
  Real best = std::exp((log_c + std::lgamma(static_cast<Real>(n) + 1)) / static_cast<Real>(n));
  if (n % k == 0) {
    const Real m = static_cast<Real>(n / k);
    best = std::min(best, std::exp((log_c + std::lgamma(m + 1)) / m));
  }
  if (n == k) {
    best = std::min(best, 2 * c / (std::sqrt(2 * c * static_cast<Real>(k - 1) + 1) + 1));
  }
  return best;
}

Real q_k(int k) {
  if (k < 2) throw InvalidArgument(fmt::format("q_k needs k >= 2, got {}", k));
  const auto kappa = static_cast<Real>(kappa_of(k));
  return 4 / (std::sqrt(5 - 4 / kappa) + 1);
}

Real log_starting_block_factor(int k) {
  if (k < 1) throw InvalidArgument(fmt::format("order k must be >= 1, got {}", k));
  const auto rk = static_cast<Real>(k);
  return std::lgamma(rk + 1) - rk * std::log(2 * rk);
}

Real starting_block_factor(int k) { return std::exp(log_starting_block_factor(k)); }

Real lambda_monotone_bound(int k, Real tol) {
  if (k < 2) throw InvalidArgument(fmt::format("lambda_monotone_bound needs k >= 2, got {}", k));
  const Real t_k = solve_h_equals_c(k, k, 2, tol).root;
  return std::min(t_k, starting_block_factor(k));
}

Real lambda_empirical_bound(int k) {
  if (k < 2) throw InvalidArgument(fmt::format("lambda_empirical_bound needs k >= 2, got {}", k));
  return 2 / static_cast<Real>(k + 1);
}

Real shoulder_lambda(int k, Real tol) {
  if (k < 2) throw InvalidArgument(fmt::format("shoulder_lambda needs k >= 2, got {}", k));
  check_tol(tol);
  // p_{k+2} / p_{k+1} - 1: negative for small lambda, where the lambda^2
  // coefficients are k/2 and (k-1)/2.
  auto g = [k](Real lambda) {
    const auto [p1, p2] = tail_pair(k, k + 2, lambda);
    return p2 / p1 - 1;
  };
  const Real ratio = std::pow(kShoulderScanHigh / kShoulderScanLow, Real{1} / (kShoulderScanPoints - 1));
  Real prev = kShoulderScanLow;
  Real g_prev = g(prev);
  if (!(g_prev < 0)) {
    throw ComputationError(fmt::format("shoulder search for k = {}: p_(k+2) >= p_(k+1) already at lambda = {}", k, prev));
  }
  for (int i = 1; i < kShoulderScanPoints; ++i) {
    const Real x = i == kShoulderScanPoints - 1 ? kShoulderScanHigh : kShoulderScanLow * std::pow(ratio, static_cast<Real>(i));
    const Real gx = g(x);
    if (gx >= 0) {
      if (gx == 0) return x;
      return bracketed_root(g, prev, x, g_prev, gx, tol, tol).root;
    }
    prev = x;
    g_prev = gx;
  }
  throw ComputationError(fmt::format("shoulder search for k = {}: no sign change of p_(k+2) - p_(k+1) on [{}, {}]",
                                     k, kShoulderScanLow, kShoulderScanHigh));
}

bool BoundsRecord::bounds_hold(Real tol) const {
  bool ok = r_k > 0 && r_k < 1 + tol;
  if (k >= 3) {
    ok = ok && r_k < r_k_upper;
  } else {
    ok = ok && std::fabs(r_k - r_k_upper) <= tol * r_k_upper;
  }
  ok = ok && t_k <= t_k_upper * (1 + tol);
  if (q_k) {
    const Real lower = std::sqrt(Real{5}) - 1;
    const Real upper = (std::sqrt(Real{33}) - 3) / 2;
    ok = ok && *q_k > lower && *q_k <= upper * (1 + tol);
  }
  if (lambda_monotone) ok = ok && *lambda_monotone <= t_k;
  return ok;
}

BoundsRecord compute_bounds(int k, Real tol) {
  if (k < 1) throw InvalidArgument(fmt::format("order k must be >= 1, got {}", k));
  const auto rk = static_cast<Real>(k);
  BoundsRecord rec{};
  rec.k = k;
  rec.r_k = solve_h_equals_c(k, k, 1, tol).root;
  rec.r_k_upper = 2 / (std::sqrt(2 * rk - 1) + 1);
  rec.t_k = solve_h_equals_c(k, k, 2, tol).root;
  rec.t_k_upper = 4 / (std::sqrt(4 * rk - 3) + 1);
  if (k >= 2) {
    rec.q_k = q_k(k);
    rec.lambda_monotone = std::min(rec.t_k, starting_block_factor(k));
    rec.lambda_empirical = lambda_empirical_bound(k);
    rec.shoulder_lambda = shoulder_lambda(k, tol);
  }
  return rec;
}

}  // namespace poissonk

#include "poissonk/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>
#include <gmpxx.h>

#include "poissonk/error.hpp"
#include "poissonk/exact_oracle.hpp"

namespace poissonk {
namespace {

Real captured_mass(const Params& params, std::span<const Real> values) {
  Real sum = 0;
  for (Real v : values) sum += v;
  return std::exp(std::log(sum) - static_cast<Real>(params.k()) * params.lambda());
}

// Next value of the forward recurrence given p_0..p_{n-1}.
Real kp_step(const std::vector<Real>& p, int k, Real lambda, std::size_t n) {
  const std::size_t terms = std::min<std::size_t>(static_cast<std::size_t>(k), n);
  Real acc = 0;
  for (std::size_t j = 1; j <= terms; ++j) acc += static_cast<Real>(j) * p[n - j];
  return lambda * acc / static_cast<Real>(n);
}

// a/b in lowest terms; GMP arithmetic requires canonical operands.
mpq_class ratio(long a, long b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

void check_finite(Real v, std::size_t n, const Params& params) {
  if (!std::isfinite(v)) {
    throw ComputationError(fmt::format(
        "h_k(n; lambda) overflows at n = {} (k = {}, lambda = {}); reduce lambda or n_max", n,
        params.k(), params.lambda()));
  }
}

}  // namespace

PmfTable::PmfTable(Params params, std::vector<Real> values)
    : params_(params), values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("pmf table needs at least p_0");
  mass_captured_ = captured_mass(params_, values_);
}

Real PmfTable::at(std::size_t n) const {
  if (n > n_max()) {
    throw InvalidArgument(fmt::format("index {} is past n_max = {}", n, n_max()));
  }
  return values_[n];
}

bool PmfTable::tail_settled() const noexcept {
  const auto k = static_cast<std::size_t>(params_.k());
  const std::size_t last = n_max();
  if (last < 2 * k) return false;
  for (std::size_t n = last - k; n < last; ++n) {
    if (!(values_[n + 1] < values_[n])) return false;
  }
  return true;
}

PmfTable build_table(const Params& params, std::size_t n_max) {
  std::vector<Real> p(n_max + 1);
  p[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    p[n] = kp_step(p, params.k(), params.lambda(), n);
    check_finite(p[n], n, params);
  }
  return PmfTable(params, std::move(p));
}

PmfTable build_table_km(const Params& params, std::size_t n_max) {
  const mpq_class lambda = oracle::to_rational(params.lambda());
  const long k = params.k();
  std::vector<mpq_class> q(n_max + 1);
  q[0] = 1;
  auto at = [&q](long i) -> const mpq_class& {
    static const mpq_class zero(0);
    return i < 0 ? zero : q[static_cast<std::size_t>(i)];
  };
  for (std::size_t un = 1; un <= n_max; ++un) {
    const long n = static_cast<long>(un);
    mpq_class v = (2 + (lambda - 2) / n) * at(n - 1);
    v -= (1 - ratio(2, n)) * at(n - 2);
    v -= ratio(k + 1, n) * lambda * at(n - k - 1);
    v += ratio(k, n) * lambda * at(n - k - 2);
    q[un] = std::move(v);
  }
  std::vector<Real> p(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    p[n] = oracle::to_real(q[n]);
    check_finite(p[n], n, params);
  }
  return PmfTable(params, std::move(p));
}

std::vector<Real> normalize(const PmfTable& table) {
  const Real shift = static_cast<Real>(table.k()) * table.lambda();
  std::vector<Real> f;
  f.reserve(table.n_max() + 1);
  for (Real v : table.values()) f.push_back(v > 0 ? std::exp(std::log(v) - shift) : Real{0});
  return f;
}

PmfTable build_adaptive_table(const Params& params, Real epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) {
    throw InvalidArgument(fmt::format("epsilon must lie in (0, 1), got {}", epsilon));
  }
  if (epsilon < std::numeric_limits<Real>::epsilon()) {
    throw InvalidArgument(fmt::format("epsilon = {} is below the working precision {}", epsilon,
                                      std::numeric_limits<Real>::epsilon()));
  }
  const auto k = static_cast<std::size_t>(params.k());
  const Real shift = static_cast<Real>(params.k()) * params.lambda();
  const Real target = 1 - epsilon;

  std::vector<Real> p{1};
  p.reserve(std::max<std::size_t>(64, 4 * k));
  Real sum = 1;
  // Counts how many consecutive strict decreases end at the current index.
  std::size_t run = 0;
  for (std::size_t n = 1; n <= kAdaptiveCap; ++n) {
    p.push_back(kp_step(p, params.k(), params.lambda(), n));
    check_finite(p[n], n, params);
    sum += p[n];
    run = p[n] < p[n - 1] ? run + 1 : 0;
    if (n >= 2 * k && run >= k && std::exp(std::log(sum) - shift) >= target) {
      return PmfTable(params, std::move(p));
    }
  }
  throw ComputationError(fmt::format(
      "adaptive truncation did not reach mass 1 - {} with a settled tail within the cap n_max = {}"
      " (k = {}, lambda = {})",
      epsilon, kAdaptiveCap, params.k(), params.lambda()));
}

std::size_t adaptive_n_max(const Params& params, Real epsilon) {
  return build_adaptive_table(params, epsilon).n_max();
}

DiffIdentityReport diff_forward(const PmfTable& table, std::size_t n) {
  const auto k = static_cast<std::size_t>(table.k());
  if (n < k || n >= table.n_max()) {
    throw InvalidArgument(fmt::format("diff_forward needs k <= n < n_max; got n = {} (k = {}, n_max = {})",
                                      n, k, table.n_max()));
  }
  const Real lambda = table.lambda();
  const auto rn = static_cast<Real>(n);
  Real acc = 0;
  for (std::size_t j = 0; j < k; ++j) acc += static_cast<Real>(n - j) * table[n - j];
  const Real rhs = lambda / (rn * (rn + 1)) * acc - static_cast<Real>(k) / rn * lambda * table[n - k];
  const Real lhs = table[n + 1] - table[n];
  return {n, lhs, rhs, std::fabs(lhs - rhs)};
}

DiffIdentityReport diff_km(const PmfTable& table, std::size_t n) {
  if (n < 2 || n > table.n_max()) {
    throw InvalidArgument(
        fmt::format("diff_km needs 2 <= n <= n_max; got n = {} (n_max = {})", n, table.n_max()));
  }
  const long k = table.k();
  const long in = static_cast<long>(n);
  const Real lambda = table.lambda();
  const auto rn = static_cast<Real>(n);
  const Real prev = table[n - 1];
  const Real prev2 = table[n - 2];
  const Real rhs = lambda / rn * prev + (rn - 2) / rn * (prev - prev2) -
                   static_cast<Real>(k + 1) / rn * lambda * table.at_or_zero(in - k - 1) +
                   static_cast<Real>(k) / rn * lambda * table.at_or_zero(in - k - 2);
  const Real lhs = table[n] - prev;
  return {n, lhs, rhs, std::fabs(lhs - rhs)};
}

}  // namespace poissonk

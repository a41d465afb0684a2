#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "poissonk/params.hpp"

namespace poissonk {

// Unnormalized pmf values p_n = h_k(n; lambda) = e^{k lambda} f_k(n; lambda)
// for n = 0..n_max at fixed (k, lambda). Immutable once built.
class PmfTable {
 public:
  PmfTable(Params params, std::vector<Real> values);

  [[nodiscard]] const Params& params() const noexcept { return params_; }
  [[nodiscard]] int k() const noexcept { return params_.k(); }
  [[nodiscard]] Real lambda() const noexcept { return params_.lambda(); }
  [[nodiscard]] std::size_t n_max() const noexcept { return values_.size() - 1; }
  [[nodiscard]] std::span<const Real> values() const noexcept { return values_; }

  // p_n; throws InvalidArgument past n_max.
  [[nodiscard]] Real at(std::size_t n) const;
  [[nodiscard]] Real operator[](std::size_t n) const noexcept { return values_[n]; }

  // p_n with the convention that negative indices contribute zero.
  [[nodiscard]] Real at_or_zero(long n) const noexcept {
    return n < 0 ? Real{0} : values_[static_cast<std::size_t>(n)];
  }

  // e^{-k lambda} * sum_n p_n, the normalized mass held by the table.
  [[nodiscard]] Real mass_captured() const noexcept { return mass_captured_; }

  // True when n_max >= 2k and the last k+1 entries are strictly decreasing.
  // Such a block extends to a strictly decreasing tail for every larger n,
  // so nothing past n_max can exceed what the table already holds.
  [[nodiscard]] bool tail_settled() const noexcept;

 private:
  Params params_;
  std::vector<Real> values_;
  Real mass_captured_;
};

// Forward recurrence p_n = (lambda/n) sum_{j=1..k} j p_{n-j}.
// Throws ComputationError naming the first index that overflows.
[[nodiscard]] PmfTable build_table(const Params& params, std::size_t n_max);

// Four-term recurrence
//   p_n = (2 + (lambda-2)/n) p_{n-1} - (1 - 2/n) p_{n-2}
//         - ((k+1)/n) lambda p_{n-k-1} + (k/n) lambda p_{n-k-2}.
// The subtractive terms make this recurrence lose all relative accuracy in
// floating point once p_n decays, so it is run in exact rational arithmetic
// on the binary value of lambda and rounded to Real at the end. Cost grows
// with n_max; intended as a cross-check, not the fast path.
[[nodiscard]] PmfTable build_table_km(const Params& params, std::size_t n_max);

// f_n = e^{-k lambda} p_n.
[[nodiscard]] std::vector<Real> normalize(const PmfTable& table);

// Smallest n_max with mass_captured >= 1 - epsilon and a settled tail.
// Throws InvalidArgument unless machine epsilon <= epsilon < 1, and ComputationError when
// no such n_max exists below kAdaptiveCap.
inline constexpr std::size_t kAdaptiveCap = 2'000'000;
[[nodiscard]] std::size_t adaptive_n_max(const Params& params, Real epsilon);

// build_table(params, adaptive_n_max(params, epsilon)) in a single pass.
[[nodiscard]] PmfTable build_adaptive_table(const Params& params, Real epsilon);

struct DiffIdentityReport {
  std::size_t n;
  Real lhs;  // direct subtraction
  Real rhs;  // via the identity
  Real abs_gap;
};

// p_{n+1} - p_n = lambda/(n(n+1)) sum_{j=0}^{k-1} (n-j) p_{n-j} - (k/n) lambda p_{n-k}.
// Requires k <= n < n_max.
[[nodiscard]] DiffIdentityReport diff_forward(const PmfTable& table, std::size_t n);

// p_n - p_{n-1} = (lambda/n) p_{n-1} + ((n-2)/n)(p_{n-1} - p_{n-2})
//                 - ((k+1)/n) lambda p_{n-k-1} + (k/n) lambda p_{n-k-2}.
// Requires 2 <= n <= n_max.
[[nodiscard]] DiffIdentityReport diff_km(const PmfTable& table, std::size_t n);

}  // namespace poissonk

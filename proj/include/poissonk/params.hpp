#pragma once

#include <cstdint>

namespace poissonk {

// Working floating type for all recurrence evaluation. On x86-64 this is the
// 80-bit extended format: 64-bit significand and an exponent range wide
// enough that p_n does not underflow over the tails we tabulate.
using Real = long double;

// Order k and rate lambda of the distribution, with kappa = k(k+1)/2.
class Params {
 public:
  // Throws InvalidArgument unless k >= 1 and lambda is finite and > 0.
  Params(int k, Real lambda);

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] Real lambda() const noexcept { return lambda_; }
  [[nodiscard]] std::int64_t kappa() const noexcept { return kappa_; }

  // Mean of the distribution, kappa * lambda.
  [[nodiscard]] Real mean() const noexcept { return static_cast<Real>(kappa_) * lambda_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  int k_;
  Real lambda_;
  std::int64_t kappa_;
};

// kappa = k(k+1)/2 for k >= 1.
[[nodiscard]] constexpr std::int64_t kappa_of(int k) noexcept {
  return static_cast<std::int64_t>(k) * (k + 1) / 2;
}

}  // namespace poissonk

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "poissonk/params.hpp"

// Ground truth for h_k(n; lambda) by direct enumeration of
//   h_k(n; lambda) = sum_{n_1 + 2 n_2 + ... + k n_k = n}
//                    lambda^{n_1+...+n_k} / (n_1! ... n_k!)
// in exact rational arithmetic. Deliberately naive; the recurrences in
// pmf.hpp are the fast path and this module exists to certify them.
namespace poissonk::oracle {

// One solution (n_1, ..., n_k) of n_1 + 2 n_2 + ... + k n_k = n.
struct TupleSolution {
  std::vector<std::uint32_t> counts;

  [[nodiscard]] std::uint64_t weighted_sum() const;  // sum_i i * n_i
  [[nodiscard]] std::uint64_t total() const;         // sum_i n_i
  friend bool operator==(const TupleSolution&, const TupleSolution&) = default;
};

inline constexpr std::uint64_t kDefaultTupleCap = 10'000'000;

// Number of solutions, i.e. partitions of n into parts <= k. Saturates at
// UINT64_MAX.
[[nodiscard]] std::uint64_t count_tuples(int k, int n);

// Every solution exactly once, ordered by descent on part sizes k..2 with
// each count ascending from zero (n_1 is whatever remains).
// Throws ComputationError when count_tuples(k, n) > cap.
[[nodiscard]] std::vector<TupleSolution> enumerate_tuples(int k, int n,
                                                          std::uint64_t cap = kDefaultTupleCap);

// h_k(n; .) as an exact polynomial in lambda.
struct HPolynomial {
  int k = 1;
  int n = 0;
  std::map<int, mpq_class> coeffs;  // power of lambda -> coefficient

  [[nodiscard]] int degree() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
  [[nodiscard]] int lowest_power() const { return coeffs.empty() ? -1 : coeffs.begin()->first; }
  [[nodiscard]] mpq_class coefficient(int power) const;
  [[nodiscard]] mpq_class evaluate(const mpq_class& lambda) const;
};

[[nodiscard]] HPolynomial h_polynomial(int k, int n, std::uint64_t cap = kDefaultTupleCap);

// Exact h_k(n; lambda) for rational lambda > 0.
[[nodiscard]] mpq_class h_exact(int k, int n, const mpq_class& lambda,
                                std::uint64_t cap = kDefaultTupleCap);

// Coefficient of lambda^2 in h_k(k+j; .), for k >= 2 and 1 <= j <= k.
[[nodiscard]] mpq_class coeff_lambda2_at(int k, int j);

// n! from a table built once on first use (n <= 1000), computed directly
// above that.
[[nodiscard]] mpz_class factorial(int n);

// Exact rational value of a finite binary floating-point number.
[[nodiscard]] mpq_class to_rational(Real x);

// Nearest Real to q, without passing through double (so no underflow
// for values below the double range).
[[nodiscard]] Real to_real(const mpq_class& q);

}  // namespace poissonk::oracle

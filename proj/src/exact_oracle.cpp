#include "poissonk/exact_oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/format.h>

#include "poissonk/error.hpp"

namespace poissonk::oracle {
namespace {

constexpr int kFactorialTableSize = 1000;

const std::vector<mpz_class>& factorial_table() {
  static const std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(kFactorialTableSize + 1);
    t[0] = 1;
    for (int i = 1; i <= kFactorialTableSize; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

void check_args(int k, int n) {
  if (k < 1) throw InvalidArgument(fmt::format("order k must be >= 1, got {}", k));
  if (n < 0) throw InvalidArgument(fmt::format("index n must be >= 0, got {}", n));
}

void check_cap(int k, int n, std::uint64_t cap) {
  const std::uint64_t count = count_tuples(k, n);
  if (count > cap) {
    throw ComputationError(fmt::format(
        "tuple enumeration for k = {}, n = {} has {} solutions, over the cap of {}", k, n, count,
        cap));
  }
}

// Walks every solution. counts[i] holds n_{i+1}; parts are fixed from k down
// to 2 and n_1 takes whatever remains.
template <typename Visit>
void for_each_tuple(int k, int n, Visit&& visit) {
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(k), 0);
  auto descend = [&](auto&& self, int part, int remaining) -> void {
    if (part == 1) {
      counts[0] = static_cast<std::uint32_t>(remaining);
      visit(counts);
      return;
    }
    for (int c = 0; c * part <= remaining; ++c) {
      counts[static_cast<std::size_t>(part - 1)] = static_cast<std::uint32_t>(c);
      self(self, part - 1, remaining - c * part);
    }
    counts[static_cast<std::size_t>(part - 1)] = 0;
  };
  descend(descend, k, n);
}

}  // namespace

std::uint64_t TupleSolution::weighted_sum() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i + 1) * counts[i];
  return s;
}

std::uint64_t TupleSolution::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::uint64_t count_tuples(int k, int n) {
  check_args(k, n);
  // ways[m] = partitions of m into parts drawn from those processed so far.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= k && part <= std::max(n, 1); ++part) {
    for (int m = part; m <= n; ++m) {
      const auto add = ways[static_cast<std::size_t>(m - part)];
      auto& w = ways[static_cast<std::size_t>(m)];
      w = (kMax - w < add) ? kMax : w + add;
    }
  }
  return ways[static_cast<std::size_t>(n)];
}

std::vector<TupleSolution> enumerate_tuples(int k, int n, std::uint64_t cap) {
  check_args(k, n);
  check_cap(k, n, cap);
  std::vector<TupleSolution> out;
  out.reserve(static_cast<std::size_t>(count_tuples(k, n)));
  for_each_tuple(k, n, [&out](const std::vector<std::uint32_t>& c) { out.push_back({c}); });
  return out;
}

mpq_class HPolynomial::coefficient(int power) const {
  auto it = coeffs.find(power);
  return it == coeffs.end() ? mpq_class(0) : it->second;
}

mpq_class HPolynomial::evaluate(const mpq_class& lambda) const {
  // Horner over the dense range of powers.
  mpq_class acc = 0;
  for (int d = degree(); d >= 0; --d) {
    acc *= lambda;
    acc += coefficient(d);
  }
  return acc;
}

HPolynomial h_polynomial(int k, int n, std::uint64_t cap) {
  check_args(k, n);
  check_cap(k, n, cap);
  HPolynomial poly{k, n, {}};
  const auto& fact = factorial_table();
  for_each_tuple(k, n, [&](const std::vector<std::uint32_t>& counts) {
    mpz_class denom = 1;
    int power = 0;
    for (auto c : counts) {
      const int ci = static_cast<int>(c);
      denom *= ci <= kFactorialTableSize ? fact[static_cast<std::size_t>(ci)] : factorial(ci);
      power += ci;
    }
    mpq_class term(1, denom);
    term.canonicalize();
    poly.coeffs[power] += term;
  });
  return poly;
}

mpq_class h_exact(int k, int n, const mpq_class& lambda, std::uint64_t cap) {
  if (sgn(lambda) <= 0) throw InvalidArgument("h_exact needs lambda > 0");
  return h_polynomial(k, n, cap).evaluate(lambda);
}

mpq_class coeff_lambda2_at(int k, int j) {
  if (k < 2 || j < 1 || j > k) {
    throw InvalidArgument(fmt::format("coeff_lambda2_at needs k >= 2 and 1 <= j <= k; got k = {}, j = {}", k, j));
  }
  return h_polynomial(k, k + j).coefficient(2);
}

mpz_class factorial(int n) {
  if (n < 0) throw InvalidArgument(fmt::format("factorial of negative {}", n));
  if (n <= kFactorialTableSize) return factorial_table()[static_cast<std::size_t>(n)];
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

mpq_class to_rational(Real x) {
  if (!std::isfinite(x)) throw InvalidArgument("to_rational needs a finite value");
  if (x == 0) return 0;
  int exponent = 0;
  const Real mantissa = std::frexp(x, &exponent);  // |mantissa| in [0.5, 1)
  constexpr int kBits = std::numeric_limits<Real>::digits;
  static_assert(kBits <= 64, "Real significand must fit in 64 bits");
  const auto scaled = static_cast<unsigned long long>(std::ldexp(std::fabs(mantissa), kBits));
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(scaled), 0, 0, &scaled);
  if (mantissa < 0) num = -num;
  mpq_class q(num);
  const int shift = exponent - kBits;
  if (shift >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  return q;
}

Real to_real(const mpq_class& q) {
  if (sgn(q) == 0) return 0;
  mpz_class num = abs(q.get_num());
  const mpz_class& den = q.get_den();
  // Scale so the integer quotient has 65 or 66 bits, then round once.
  const long shift = 66 - static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) +
                     static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  if (shift >= 0) {
    num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    num >>= static_cast<mp_bitcnt_t>(-shift);
  }
  mpz_class quotient = num / den;
  const mpz_class low = quotient & mpz_class(0xffffffffUL);
  const mpz_class high = quotient >> 32;
  const Real value = std::ldexp(static_cast<Real>(high.get_ui()), 32) + static_cast<Real>(low.get_ui());
  const Real out = std::ldexp(value, static_cast<int>(-shift));
  return sgn(q) < 0 ? -out : out;
}

}  // namespace poissonk::oracle

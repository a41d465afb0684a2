#include "poissonk/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "poissonk/error.hpp"

namespace poissonk {

Params::Params(int k, Real lambda) : k_(k), lambda_(lambda), kappa_(kappa_of(k)) {
  if (k < 1) throw InvalidArgument(fmt::format("order k must be >= 1, got {}", k));
  if (!std::isfinite(lambda) || !(lambda > 0)) {
    throw InvalidArgument(fmt::format("rate lambda must be finite and > 0, got {}", lambda));
  }
}

}  // namespace poissonk

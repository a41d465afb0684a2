#pragma once

#include <stdexcept>
#include <string>

namespace poissonk {

// Bad caller input: out-of-range parameters, indices past the table, etc.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical computation that could not complete (overflow, no bracket,
// iteration cap, enumeration cap).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poissonk

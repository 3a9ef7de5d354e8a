#pragma once

#include <stdexcept>
#include <string>

namespace rkhs {

// Bad arguments: dimension mismatches, out-of-range indices, invalid parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration problems the user can fix (bad config file, infeasible radius).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: broken Gram matrix, failed factorization, divergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rkhs

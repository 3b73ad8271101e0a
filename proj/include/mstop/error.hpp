#pragma once

#include <stdexcept>
#include <string>

namespace mstop {

// Invalid user configuration (bad parameters, insufficient truncation, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to reach its requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mstop

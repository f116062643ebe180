#pragma once

#include <stdexcept>
#include <string>

namespace hbsm {

/// Raised when an argument falls outside its physical domain
/// (reflectivity outside [0,1], negative window, mismatched modes, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot meet its tolerance or a state
/// would leave the truncated Fock space.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the sweep front end for malformed or out-of-domain configs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hbsm

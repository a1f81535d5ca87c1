#pragma once

#include <stdexcept>
#include <string>

namespace netbandit {

/// Invalid user-supplied parameters (bad probabilities, negative sigma, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (length mismatch, label out of range).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Observed data that cannot be used, e.g. non-finite rewards.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization failed even after the jitter schedule was exhausted.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver declined an instance outside its supported size.
class SolverRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}
}  // namespace detail

}  // namespace netbandit

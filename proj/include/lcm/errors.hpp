#pragma once

#include <stdexcept>
#include <string>

namespace lcm {

/// A tail integral that does not converge (the profile never increases).
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rejection sampling whose acceptance rate fell below the supported floor.
class InefficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio or comparison whose inputs make it undefined.
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lcm

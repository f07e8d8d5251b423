#pragma once

#include <stdexcept>
#include <string>

namespace wander {

// Input outside the domain of a map or formula (e.g. a point on or outside
// the unit circle).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A point given in cusp coordinates that lies outside the standard collar.
class OutsideCollarError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The origin is a critical point where the construction needs g'(0) != 0.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypothesis the computation relies on is not met.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative limit did not meet its tolerance within the allowed budget.
class NonConvergentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wander

#pragma once

#include <stdexcept>
#include <string>

namespace modslope {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Root finding could not bracket or converge.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A desk-scale guard (e.g. enumeration rank) was exceeded.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken construction invariant; indicates a bug rather than bad input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace modslope

#ifndef PBEAUTY_ERRORS_HPP
#define PBEAUTY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pbeauty {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the hypothesis guaranteeing an interior root fails outright
/// (e.g. asking for the infinite-population root with m <= 2).
class NoRootError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative method exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pbeauty

#endif

#ifndef DDIV_ERRORS_HPP
#define DDIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddiv {

// Caller passed arguments that violate an operation's precondition
// (dimension mismatch, empty domain, malformed case, ...).
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A functional's domain guard failed, or an ellipticity requirement
// does not hold at the point where it is needed.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear or nonlinear solve failed (singular system, iteration cap,
// line-search breakdown). Carries a human-readable diagnostic.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ddiv

#endif

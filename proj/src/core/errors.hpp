#ifndef GGLOPT_CORE_ERRORS_HPP_
#define GGLOPT_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gglopt {

// Input failed validation (asymmetric matrix, bad sample counts, ...).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A matrix left the domain of an operation (non-PD argument to log det).
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& msg, int instance = -1)
      : std::domain_error(msg), instance_(instance) {}
  int instance() const { return instance_; }

 private:
  int instance_;
};

// Dense linear algebra failed (eigendecomposition did not converge, singular solve).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gglopt

#endif  // GGLOPT_CORE_ERRORS_HPP_

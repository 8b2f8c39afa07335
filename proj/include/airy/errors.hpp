#ifndef AIRY_ERRORS_HPP
#define AIRY_ERRORS_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace airy {

/// A state lies outside the chart an operation is defined on (e.g. gamma == 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation point sits on (or within guard distance of) a singular locus.
class SingularLocusError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Configuration is valid but not one this operation handles (sign regimes etc.).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested time lies beyond the maximal existence interval.
class OutOfDomain : public std::out_of_range {
 public:
  OutOfDomain(const std::string& what, double blowup_estimate)
      : std::out_of_range(what), blowup_estimate_(blowup_estimate) {}
  explicit OutOfDomain(const std::string& what)
      : OutOfDomain(what, std::numeric_limits<double>::quiet_NaN()) {}

  double blowup_estimate() const noexcept { return blowup_estimate_; }

 private:
  double blowup_estimate_;
};

class CflViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace airy

#endif  // AIRY_ERRORS_HPP

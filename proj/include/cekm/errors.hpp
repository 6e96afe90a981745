#pragma once

#include <stdexcept>
#include <string>

namespace cekm {

// Malformed input data or configuration.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parameter outside a mathematical domain guard.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Estimator undefined on the given data (e.g. every top-k observation censored).
class DegenerateEstimateError : public DomainError {
 public:
  explicit DegenerateEstimateError(const std::string& what) : DomainError(what) {}
};

// Moment geometry collapsed: second log-moment equals the squared first one.
class SingularMomentError : public DomainError {
 public:
  explicit SingularMomentError(const std::string& what) : DomainError(what) {}
};

// Numerical failure: non-finite evaluation or non-convergent quadrature.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cekm

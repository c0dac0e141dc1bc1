#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad sizes, odd grid counts, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the range the formulas are defined for (k + p - 1 <= 0, p == q, ...).
class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of a power or root, e.g. h <= 0 under a fractional power.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::size_t node, double value)
      : Error(what), node_(node), value_(value) {}
  std::size_t node() const { return node_; }
  double value() const { return value_; }

 private:
  std::size_t node_;
  double value_;
};

/// The spherical Hessian left the Garding cone at some node.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, std::size_t worst_node, double margin)
      : Error(what), worst_node_(worst_node), margin_(margin) {}
  std::size_t worst_node() const { return worst_node_; }
  double margin() const { return margin_; }

 private:
  std::size_t worst_node_;
  double margin_;
};

/// Raised by the dense LU when a pivot collapses. near_null() is the right
/// singular vector of the smallest singular value.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double smallest_singular_value,
                      std::vector<double> near_null)
      : Error(what), sigma_min_(smallest_singular_value), near_null_(std::move(near_null)) {}
  double smallest_singular_value() const { return sigma_min_; }
  const std::vector<double>& near_null() const { return near_null_; }

 private:
  double sigma_min_;
  std::vector<double> near_null_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmk

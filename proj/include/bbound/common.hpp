#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbound {

// Error taxonomy. Construction-time failures throw; report-only checks never do.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParameterError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class RangeError : public Error {
public:
  using Error::Error;
};

class ConstructionError : public Error {
public:
  using Error::Error;
};

// phi' reached zero during integration; carries the failure location.
class MonotonicityError : public Error {
public:
  MonotonicityError(const std::string& what, double z_fail)
      : Error(what), z(z_fail) {}
  double z;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class EllipticityError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

inline double sq(double x) { return x * x; }

// Central-difference step for numerical differentiation of C^2+ data.
inline double fd_step(double s) {
  static const double cbrt_eps = std::cbrt(2.220446049250313e-16);
  return cbrt_eps * std::max(1.0, std::fabs(s));
}

}  // namespace bbound

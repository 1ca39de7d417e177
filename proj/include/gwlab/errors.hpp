#pragma once

#include <stdexcept>
#include <string>

namespace gwlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or violated precondition on user-supplied values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The map fails the expansion certificate (inf |Df| <= 1).
class NotExpanding : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Periodic-orbit enumeration would exceed the configured word cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DegenerateDynamics : public Error {
 public:
  using Error::Error;
};

/// sigma(phi) is numerically zero, so the CLT/LIL normalisation is undefined.
class ZeroVariance : public Error {
 public:
  using Error::Error;
};

/// The periodic-orbit criterion and the variance criterion gave different answers.
class CriteriaDisagree : public Error {
 public:
  using Error::Error;
};

}  // namespace gwlab

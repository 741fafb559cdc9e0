#pragma once

#include <stdexcept>
#include <string>

namespace phystrack {

/// Malformed model, mismatched dimensions or out-of-range parameters.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or malformed input files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation could not produce a finite or admissible result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The calibration recording does not follow the stand-step-stand protocol
/// or the pose check failed; the user should redo it.
class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace phystrack

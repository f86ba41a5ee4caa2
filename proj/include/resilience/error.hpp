#pragma once

#include <stdexcept>
#include <string>

namespace resilience {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes disagree with the problem dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid or malformed input data (non-finite values, bad config).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Not enough observations to train and calibrate.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// The requested miscoverage level cannot be met with the calibration set size.
class CoverageInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An optimization problem that should have a solution was infeasible.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure failed to terminate (simplex pivots, SIR steps).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial enumeration or search would exceed its guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace resilience

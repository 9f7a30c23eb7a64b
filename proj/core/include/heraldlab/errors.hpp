#pragma once

#include <stdexcept>
#include <string>

namespace heraldlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its mathematical domain (T not in [0,1], eta < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A truncated-Fock construction leaked more amplitude than tolerated.
class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_ = 0.0;
};

/// Resource parameters degenerate to a product state; heralding with n > 0
/// would return noise.
class NotEntangled : public Error {
 public:
  using Error::Error;
};

/// A diagonal of the herald-decomposition table vanished; the triangular
/// solve for the projector coefficients has no unique solution.
class SingularTable : public Error {
 public:
  using Error::Error;
};

/// A 1-D root bracket for the Gaussian parameter solve failed.
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// AWG voltage left the calibrated range; carries the modulation rescale
/// that would bring it back inside.
class RangeExceeded : public Error {
 public:
  RangeExceeded(const std::string& what, double suggested_scale)
      : Error(what), suggested_scale_(suggested_scale) {}
  double suggested_scale() const { return suggested_scale_; }

 private:
  double suggested_scale_ = 1.0;
};

/// Target waveform has support after the modulation end time.
class UnreachableWaveform : public Error {
 public:
  using Error::Error;
};

/// Modulation program is identically zero.
class EmptyModulation : public Error {
 public:
  using Error::Error;
};

/// Two time grids that must match do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Too few frames for the requested covariance decomposition.
class InsufficientFrames : public Error {
 public:
  using Error::Error;
};

/// Configuration file failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace heraldlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlslab {

/// Array or sample count does not match the grid it is paired with.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter is outside its admissible set (unsupported exponent, M above band, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integer lattice arithmetic would overflow.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The time grid is too coarse for a requested spectral quantity.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, double required_dt)
      : std::runtime_error(what), required_dt_(required_dt) {}
  double required_dt() const noexcept { return required_dt_; }

 private:
  double required_dt_;
};

/// Non-finite coefficients or runaway mass drift during time integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace nlslab

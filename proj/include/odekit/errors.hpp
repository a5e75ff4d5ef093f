/**
 * @file errors.hpp
 * @brief Exception types raised by steppers, controllers and drivers.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odekit {

/// Two states taking part in one operation have different lengths, or a
/// state has the wrong length for a system.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller-supplied parameter violates its precondition (dt <= 0, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense output queried outside the last completed interval.
class IntervalRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The step size controller cannot find an acceptable step.
class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(double t, double dt, const std::string& what)
      : std::runtime_error(what + " (t=" + std::to_string(t) +
                           ", dt=" + std::to_string(dt) + ")"),
        t_(t),
        dt_(dt) {}

  double time() const noexcept { return t_; }
  double step_size() const noexcept { return dt_; }

 private:
  double t_;
  double dt_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NewtonNonconvergence : public std::runtime_error {
 public:
  explicit NewtonNonconvergence(std::size_t iterations)
      : std::runtime_error("Newton iteration did not converge after " +
                           std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

}  // namespace odekit

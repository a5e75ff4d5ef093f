/**
 * @file convergence.hpp
 * @brief Observed convergence order from global errors under dt refinement.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "odekit/algebra.hpp"
#include "odekit/errors.hpp"
#include "odekit/symplectic_euler.hpp"

namespace odekit {

/// Errors below this are rounding noise and are left out of the fit.
inline constexpr double error_floor = 1e-13;

struct ErrorSample {
  double dt = 0.0;
  double error = 0.0;
  bool used = false;
};

struct OrderEstimate {
  /// Least-squares slope of log(error) against log(dt); NaN if fewer than
  /// two samples survive the floor.
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<ErrorSample> samples;
  /// True when at least one sample fell below the floor.
  bool underflow = false;

  std::size_t points_used() const;
};

/// dt0, dt0/2, ..., levels values.
std::vector<double> halving_steps(double dt0, std::size_t levels);

/// Requires at least three positive dt values with a constant ratio.
void require_geometric(std::span<const double> dts);

OrderEstimate fit_order(std::span<const double> dts, std::span<const double> errors,
                        double floor = error_floor);

/// error_at(dt) returns the global error of a run with step dt.
template <class ErrorAt>
OrderEstimate observed_order(std::span<const double> dts, ErrorAt&& error_at) {
  require_geometric(dts);
  std::vector<double> errors;
  errors.reserve(dts.size());
  for (const double dt : dts) errors.push_back(error_at(dt));
  return fit_order(dts, errors);
}

template <RangeState State>
double distance_inf(const State& a, const State& b) {
  return RangeAlgebra::reduce_max([](auto x, auto y) { return std::abs(x - y); }, a, b);
}

template <class State>
double distance_inf(const PairState<State>& a, const PairState<State>& b) {
  return std::max(distance_inf(a.q, b.q), distance_inf(a.p, b.p));
}

/**
 * Integrate from (x0, t0) to t1 with fixed steps for every dt and fit the
 * order against exact(t1). Each dt must divide t1 - t0 into whole steps.
 */
template <class Stepper, class System, class State, class Exact>
OrderEstimate observed_order(Stepper& stepper, System&& system, Exact&& exact,
                             const State& x0, double t0, double t1,
                             std::span<const double> dts) {
  const State reference = exact(t1);
  return observed_order(dts, [&](double dt) {
    const double steps = std::round((t1 - t0) / dt);
    if (steps < 1 || std::abs(steps * dt - (t1 - t0)) > 1e-9 * (t1 - t0)) {
      throw ParameterError("dt does not divide the interval into whole steps");
    }
    State x = x0;
    const auto n = static_cast<std::size_t>(steps);
    for (std::size_t k = 0; k < n; ++k) {
      stepper.do_step(system, x, t0 + static_cast<double>(k) * dt, dt);
    }
    return distance_inf(x, reference);
  });
}

}  // namespace odekit

/**
 * @file controlled_error_stepper.hpp
 * @brief Accept/reject step size control around an error stepper.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "odekit/algebra.hpp"
#include "odekit/errors.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

struct ControllerParams {
  double atol = 1e-6;
  double rtol = 1e-6;
  double safety = 0.9;
  double fac_min = 0.2;
  double fac_max = 5.0;
  double dt_min = 1e-14;
  std::size_t max_rejections = 100;

  /// Throws ParameterError if the invariants do not hold.
  void validate() const {
    if (!(atol >= 0.0) || !(rtol >= 0.0) || !(atol + rtol > 0.0)) {
      throw ParameterError("controller tolerances must be >= 0 with atol + rtol > 0");
    }
    if (!(fac_min > 0.0 && fac_min < 1.0 && fac_max > 1.0)) {
      throw ParameterError("controller factors must satisfy 0 < fac_min < 1 < fac_max");
    }
    if (!(safety > 0.0 && safety <= 1.0)) {
      throw ParameterError("controller safety factor must lie in (0, 1]");
    }
    if (!(dt_min > 0.0)) throw ParameterError("dt_min must be positive");
  }
};

/// accepted_dt_unchanged covers every accepted step whose next dt is not
/// larger than the one just used.
enum class StepOutcome { accepted_dt_unchanged, accepted_dt_increased, rejected };

inline bool accepted(StepOutcome o) noexcept { return o != StepOutcome::rejected; }

/// Weighted max-norm of xerr with scale atol + rtol * (|x| + |dt| |dxdt|).
/// Values <= 1 are tolerable. A NaN anywhere yields NaN.
template <class State, class Algebra = RangeAlgebra>
scalar_of<State> error_ratio(const State& xerr, const State& x_old, const State& dxdt_old,
                             scalar_of<State> dt, const ControllerParams& p) {
  if (dt == 0) throw ParameterError("error_ratio requires dt != 0");
  const auto adt = std::abs(dt);
  const auto atol = static_cast<scalar_of<State>>(p.atol);
  const auto rtol = static_cast<scalar_of<State>>(p.rtol);
  return Algebra::reduce_max(
      [=](auto e, auto x, auto d) {
        return std::abs(e) / (atol + rtol * (std::abs(x) + adt * std::abs(d)));
      },
      xerr, x_old, dxdt_old);
}

/**
 * I-controller: dt * clamp(safety * err^(-1/(q+1)), fac_min, fac_max) with q
 * the error order; err == 0 gives the fac_max ceiling and a non-finite err
 * the fac_min floor. after_rejection caps the factor at 1.
 *
 * Throws StepSizeUnderflow when a shrinking step falls below dt_min.
 */
inline double next_step_size(double dt, double err, StepperOrderInfo info,
                             const ControllerParams& p, bool after_rejection,
                             double t = std::numeric_limits<double>::quiet_NaN()) {
  if (dt == 0.0) throw ParameterError("next_step_size requires dt != 0");
  if (err < 0.0) throw ParameterError("next_step_size requires err >= 0");
  double factor;
  if (err == 0.0) {
    factor = p.fac_max;
  } else if (!std::isfinite(err)) {
    factor = p.fac_min;
  } else {
    const double exponent = -1.0 / (info.error_order + 1);
    factor = std::clamp(p.safety * std::pow(err, exponent), p.fac_min, p.fac_max);
  }
  if (after_rejection) factor = std::min(factor, 1.0);
  const double dt_new = dt * factor;
  if (factor < 1.0 && std::abs(dt_new) < p.dt_min) {
    throw StepSizeUnderflow(t, dt_new, "step size fell below dt_min");
  }
  return dt_new;
}

/**
 * Generic controlled stepper for any error stepper.
 *
 * The derivative f(x, t) is computed once per (x, t) and reused across
 * rejected trials. For FSAL steppers the last stage of an accepted step
 * seeds the next one. The cache is keyed on the exact values of x and t,
 * so modifying x between calls is always safe.
 */
template <class ErrorStepper>
class ControlledErrorStepper {
 public:
  using stepper_type = ErrorStepper;
  using state_type = typename ErrorStepper::state_type;
  using deriv_type = typename ErrorStepper::deriv_type;
  using value_type = typename ErrorStepper::value_type;
  using time_type = typename ErrorStepper::time_type;
  using algebra_type = typename ErrorStepper::algebra_type;
  using stepper_category = controlled_stepper_tag;

  explicit ControlledErrorStepper(ControllerParams params = {},
                                  ErrorStepper stepper = ErrorStepper{})
      : params_(params), stepper_(std::move(stepper)) {
    params_.validate();
  }

  static constexpr StepperOrderInfo order_info() { return ErrorStepper::order_info(); }

  /**
   * Try one step of size dt from (x, t). On acceptance x and t advance and
   * dt becomes the proposal for the next step. On rejection x and t are
   * untouched and dt shrinks.
   */
  template <class System>
  StepOutcome try_step(System&& system, state_type& x, time_type& t, time_type& dt) {
    if (dt == 0 || !std::isfinite(dt)) throw ParameterError("try_step requires finite dt != 0");
    ensure_derivative(system, x, t);

    algebra_type::resize_like(x_new_, x);
    if constexpr (ErrorStepper::is_fsal) {
      stepper_.do_step(system, x, dxdt_, t, x_new_, dxdt_new_, dt, xerr_);
    } else {
      stepper_.do_step(system, x, dxdt_, t, x_new_, dt, xerr_);
    }

    const auto err = error_ratio<state_type, algebra_type>(xerr_, x, dxdt_, dt, params_);
    last_error_ = err;

    if (!(err <= 1)) {
      ++rejections_;
      if (rejections_ > params_.max_rejections) {
        throw StepSizeUnderflow(t, dt, "too many consecutive step rejections");
      }
      dt = static_cast<time_type>(
          next_step_size(dt, err, order_info(), params_, true, t));
      return StepOutcome::rejected;
    }

    const time_type dt_new = static_cast<time_type>(
        next_step_size(dt, err, order_info(), params_, rejections_ > 0, t));
    rejections_ = 0;
    last_dt_ = dt;
    algebra_type::assign(x, x_new_);
    t += dt;
    if constexpr (ErrorStepper::is_fsal) {
      std::swap(dxdt_, dxdt_new_);
      algebra_type::assign(cached_x_, x);
      cached_t_ = t;
    } else {
      cache_valid_ = false;
    }

    const bool grew = std::abs(dt_new) > std::abs(dt);
    dt = dt_new;
    return grew ? StepOutcome::accepted_dt_increased : StepOutcome::accepted_dt_unchanged;
  }

  /// Forget the cached derivative.
  void reset() noexcept { cache_valid_ = false; }

  const ControllerParams& params() const noexcept { return params_; }
  ErrorStepper& stepper() noexcept { return stepper_; }
  const ErrorStepper& stepper() const noexcept { return stepper_; }

  /// Error ratio of the most recent trial, accepted or not.
  value_type last_error_ratio() const noexcept { return last_error_; }
  /// Width of the most recent accepted step.
  time_type last_step_size() const noexcept { return last_dt_; }
  /// Derivative at the start of the most recent trial.
  const deriv_type& derivative() const noexcept { return dxdt_; }
  std::size_t consecutive_rejections() const noexcept { return rejections_; }

 private:
  template <class System>
  void ensure_derivative(System& system, const state_type& x, time_type t) {
    const bool hit = cache_valid_ && t == cached_t_ &&
                     std::ranges::size(x) == std::ranges::size(cached_x_) &&
                     std::ranges::equal(x, cached_x_);
    if (hit) return;
    algebra_type::resize_like(dxdt_, x);
    system(x, dxdt_, t);
    algebra_type::assign(cached_x_, x);
    cached_t_ = t;
    cache_valid_ = true;
    rejections_ = 0;
  }

  ControllerParams params_;
  ErrorStepper stepper_;
  state_type x_new_{};
  state_type xerr_{};
  deriv_type dxdt_{};
  deriv_type dxdt_new_{};
  state_type cached_x_{};
  time_type cached_t_{};
  bool cache_valid_ = false;
  std::size_t rejections_ = 0;
  value_type last_error_ = 0;
  time_type last_dt_ = 0;
};

}  // namespace odekit

/**
 * @file dense_output_dopri5.hpp
 * @brief Dense output stepper built on the controlled Dormand-Prince pair.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "odekit/butcher_tableau.hpp"
#include "odekit/controlled_error_stepper.hpp"
#include "odekit/errors.hpp"
#include "odekit/explicit_error_dopri5.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

/**
 * Dormand-Prince continuous extension on one step [t0, t0 + dt]:
 *
 *   x(theta) = x0 + theta (D + (1 - theta) (B + theta (R + (1 - theta) Q)))
 *
 * with D = x1 - x0, B = dt k1 - D, R = D - dt k7 - B and
 * Q = dt (d1 k1 + d3 k3 + d4 k4 + d5 k5 + d6 k6 + d7 k7).
 * Fourth order in the interior, exact at theta = 0 and theta = 1 up to rounding.
 */
template <class State, class Algebra = RangeAlgebra>
void dopri5_interpolate(scalar_of<State> theta, scalar_of<State> dt, const State& x0,
                        const State& x1, const StageRecord<State>& stages, State& out) {
  using D = DormandPrinceDenseCoefficients;
  using T = scalar_of<State>;
  const T th = theta;
  const T th1 = T{1} - theta;
  const auto& k = stages.k;
  Algebra::resize_like(out, x0);
  Algebra::for_each(
      out,
      [=](T a, T b, T k1, T k3, T k4, T k5, T k6, T k7) {
        const T diff = b - a;
        const T bspl = dt * k1 - diff;
        const T r4 = diff - dt * k7 - bspl;
        const T q = dt * (T(D::d1) * k1 + T(D::d3) * k3 + T(D::d4) * k4 + T(D::d5) * k5 +
                          T(D::d6) * k6 + T(D::d7) * k7);
        return a + th * (diff + th1 * (bspl + th * (r4 + th1 * q)));
      },
      x0, x1, k[0], k[2], k[3], k[4], k[5], k[6]);
}

/**
 * DenseOutputStepper over Dormand-Prince 5(4). Owns the state and step size;
 * each do_step() performs one accepted controlled step, retrying rejected
 * trials internally. calc_state() evaluates the continuous extension inside
 * the latest interval without calling the system.
 */
template <class State, class Algebra = RangeAlgebra>
class DenseOutputDopri5 {
 public:
  using state_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using error_stepper_type = ExplicitErrorDopri5<State, Algebra>;
  using controlled_type = ControlledErrorStepper<error_stepper_type>;
  using stepper_category = dense_output_stepper_tag;

  explicit DenseOutputDopri5(ControllerParams params = {}) : controlled_(params) {}

  static constexpr StepperOrderInfo order_info() { return error_stepper_type::order_info(); }

  void initialize(const State& x0, time_type t0, time_type dt0) {
    if (!(dt0 > 0) || !std::isfinite(dt0)) {
      throw ParameterError("dense output initialize requires finite dt0 > 0");
    }
    Algebra::assign(x_cur_, x0);
    Algebra::assign(x_prev_, x0);
    t_cur_ = t0;
    t_prev_ = t0;
    dt_ = dt0;
    initialized_ = true;
    has_interval_ = false;
    attempted_ = 0;
    rejected_ = 0;
    controlled_.reset();
  }

  /// One accepted step; returns the covered interval (t_prev, t_cur).
  template <class System>
  std::pair<time_type, time_type> do_step(System&& system) {
    if (!initialized_) throw ParameterError("dense output stepper used before initialize");
    Algebra::assign(x_prev_, x_cur_);
    t_prev_ = t_cur_;
    has_interval_ = false;
    StepOutcome outcome;
    do {
      ++attempted_;
      try {
        outcome = controlled_.try_step(system, x_cur_, t_cur_, dt_);
      } catch (const StepSizeUnderflow&) {
        ++rejected_;  // the abandoned trial
        throw;
      }
      if (outcome == StepOutcome::rejected) ++rejected_;
    } while (outcome == StepOutcome::rejected);
    step_dt_ = controlled_.last_step_size();
    has_interval_ = true;
    return {t_prev_, t_cur_};
  }

  /// State at t inside [previous_time(), current_time()].
  void calc_state(time_type t, State& out) const {
    if (!has_interval_) throw IntervalRangeError("dense output has no completed interval");
    if (t < t_prev_ || t > t_cur_) {
      throw IntervalRangeError("dense output query at t=" + std::to_string(t) +
                               " outside [" + std::to_string(t_prev_) + ", " +
                               std::to_string(t_cur_) + "]");
    }
    const time_type theta = (t - t_prev_) / (t_cur_ - t_prev_);
    dopri5_interpolate<State, Algebra>(theta, step_dt_, x_prev_, x_cur_,
                                       controlled_.stepper().stages(), out);
  }

  State calc_state(time_type t) const {
    State out = Algebra::clone_shape(x_cur_);
    calc_state(t, out);
    return out;
  }

  const State& current_state() const noexcept { return x_cur_; }
  const State& previous_state() const noexcept { return x_prev_; }
  time_type current_time() const noexcept { return t_cur_; }
  time_type previous_time() const noexcept { return t_prev_; }
  /// Proposed width of the next step.
  time_type current_time_step() const noexcept { return dt_; }
  bool has_interval() const noexcept { return has_interval_; }

  std::size_t steps_attempted() const noexcept { return attempted_; }
  std::size_t steps_rejected() const noexcept { return rejected_; }

  const controlled_type& controlled_stepper() const noexcept { return controlled_; }

 private:
  controlled_type controlled_;
  State x_cur_{};
  State x_prev_{};
  time_type t_cur_{};
  time_type t_prev_{};
  time_type dt_{};
  time_type step_dt_{};
  bool initialized_ = false;
  bool has_interval_ = false;
  std::size_t attempted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace odekit

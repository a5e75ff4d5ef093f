/**
 * @file integrate.hpp
 * @brief Drivers that iterate a stepper over an interval and feed an observer.
 *
 * integrate_const observes on the uniform grid t0 + k dt and picks its
 * strategy from the stepper category: fixed steps for plain steppers,
 * adaptive steps between grid points for controlled steppers, and dense
 * output interpolation for dense-output steppers. integrate_adaptive
 * observes after every accepted controlled step.
 *
 * The state is passed by reference and holds the final state on return.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <utility>

#include "odekit/controlled_error_stepper.hpp"
#include "odekit/errors.hpp"
#include "odekit/implicit_euler.hpp"
#include "odekit/stepper_categories.hpp"
#include "odekit/symplectic_euler.hpp"

namespace odekit {

struct IntegrationCounters {
  std::size_t steps_attempted = 0;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::size_t system_evaluations = 0;
};

template <class State>
struct IntegrationReport : IntegrationCounters {
  State final_state{};
  double final_time = 0.0;
};

/// Step size control gave up; carries the counters up to the failure.
class IntegrationFailure : public StepSizeUnderflow {
 public:
  IntegrationFailure(const StepSizeUnderflow& cause, IntegrationCounters partial,
                     double t_reached)
      : StepSizeUnderflow(cause), partial_(partial), t_reached_(t_reached) {}

  const IntegrationCounters& partial() const noexcept { return partial_; }
  /// Last time at which the integration held an accepted state.
  double time_reached() const noexcept { return t_reached_; }

 private:
  IntegrationCounters partial_;
  double t_reached_;
};

struct NullObserver {
  template <class State>
  void operator()(const State&, double) const noexcept {}
};

/// Relative slack used to snap the last grid point or step onto t1.
inline constexpr double grid_snap = 1e-10;

namespace detail {

template <class F>
struct CountingCall {
  F* f;
  std::size_t* count;

  template <class... Args>
  decltype(auto) operator()(Args&&... args) const {
    ++*count;
    return (*f)(std::forward<Args>(args)...);
  }
};

/// Wrap a system so each right-hand-side evaluation bumps count. For
/// Hamiltonian systems one evaluation is one coordinate_rhs call.
template <class System>
auto with_counter(System& system, std::size_t& count) {
  return CountingCall<System>{&system, &count};
}

template <class R, class J>
auto with_counter(JacobianSystem<R, J>& system, std::size_t& count) {
  return JacobianSystem{CountingCall<R>{&system.rhs, &count}, std::ref(system.jacobian)};
}

template <class R, class J>
auto with_counter(const JacobianSystem<R, J>& system, std::size_t& count) {
  return JacobianSystem{CountingCall<const R>{&system.rhs, &count},
                        std::cref(system.jacobian)};
}

template <class C, class M>
auto with_counter(SeparableHamiltonian<C, M>& system, std::size_t& count) {
  return SeparableHamiltonian{CountingCall<C>{&system.coordinate_rhs, &count},
                              std::ref(system.momentum_rhs)};
}

template <class C, class M>
auto with_counter(const SeparableHamiltonian<C, M>& system, std::size_t& count) {
  return SeparableHamiltonian{CountingCall<const C>{&system.coordinate_rhs, &count},
                              std::cref(system.momentum_rhs)};
}

inline void check_interval(double t0, double t1, double dt, const char* what) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw ParameterError(std::string(what) + " requires finite t1 > t0");
  }
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw ParameterError(std::string(what) + " requires finite dt > 0");
  }
}

/// Number of whole grid steps of width dt in [t0, t1].
inline std::size_t grid_steps(double t0, double t1, double dt) {
  const double ratio = (t1 - t0) / dt;
  auto n = static_cast<std::size_t>(std::floor(ratio));
  if (ratio - static_cast<double>(n) >= 1.0 - grid_snap) ++n;
  return n;
}

/// t0 + k dt, snapped to t1 when within grid_snap * dt.
inline double grid_time(double t0, double t1, double dt, std::size_t k) {
  const double t = t0 + static_cast<double>(k) * dt;
  return std::abs(t - t1) <= grid_snap * dt ? t1 : t;
}

/// Controlled steps from t until exactly t_end. The final step is clamped.
template <class Stepper, class System, class State, class OnAccept>
void advance_adaptive(Stepper& stepper, System& system, State& x, double& t, double t_end,
                      double& dt, IntegrationCounters& c, OnAccept&& on_accept) {
  while (t < t_end) {
    const double remaining = t_end - t;
    const bool last = dt >= remaining - grid_snap * dt;
    double trial = last ? remaining : dt;
    ++c.steps_attempted;
    StepOutcome outcome;
    try {
      outcome = stepper.try_step(system, x, t, trial);
    } catch (const StepSizeUnderflow&) {
      ++c.steps_rejected;  // the abandoned trial
      throw;
    }
    if (outcome == StepOutcome::rejected) {
      ++c.steps_rejected;
      dt = trial;
      continue;
    }
    ++c.steps_accepted;
    if (last) {
      t = t_end;
      dt = std::max(dt, trial);
    } else {
      dt = trial;
    }
    on_accept(x, t);
  }
}

template <class State>
IntegrationReport<State> make_report(const IntegrationCounters& c, const State& x, double t) {
  IntegrationReport<State> r;
  static_cast<IntegrationCounters&>(r) = c;
  r.final_state = x;
  r.final_time = t;
  return r;
}

}  // namespace detail

/// Adaptive integration from t0 to exactly t1, observing t0 and every
/// accepted step.
template <ControlledStepper Stepper, class System, class State,
          class Observer = NullObserver>
IntegrationReport<State> integrate_adaptive(Stepper& stepper, System&& system, State& x,
                                            double t0, double t1, double dt0,
                                            Observer&& observer = {}) {
  detail::check_interval(t0, t1, dt0, "integrate_adaptive");
  IntegrationCounters c;
  auto counted = detail::with_counter(system, c.system_evaluations);
  double t = t0;
  double dt = dt0;
  observer(std::as_const(x), t);
  try {
    detail::advance_adaptive(stepper, counted, x, t, t1, dt, c,
                             [&](const State& s, double ts) { observer(s, ts); });
  } catch (const StepSizeUnderflow& e) {
    throw IntegrationFailure(e, c, t);
  }
  return detail::make_report(c, x, t);
}

/// Dense-output integration observed on t0 + k observe_dt and finally at t1.
template <DenseOutputStepper Stepper, class System, class State,
          class Observer = NullObserver>
IntegrationReport<State> integrate_const_dense(Stepper& stepper, System&& system, State& x,
                                               double t0, double t1, double observe_dt,
                                               Observer&& observer = {}) {
  detail::check_interval(t0, t1, observe_dt, "integrate_const_dense");
  IntegrationCounters c;
  auto counted = detail::with_counter(system, c.system_evaluations);
  stepper.initialize(x, t0, std::min(observe_dt, t1 - t0));
  observer(std::as_const(x), t0);

  auto sync_counters = [&] {
    c.steps_attempted = stepper.steps_attempted();
    c.steps_rejected = stepper.steps_rejected();
    c.steps_accepted = c.steps_attempted - c.steps_rejected;
  };

  double t_obs = t0;
  try {
    for (std::size_t k = 1; t_obs < t1; ++k) {
      double target = t0 + static_cast<double>(k) * observe_dt;
      if (target >= t1 - grid_snap * observe_dt) target = t1;
      while (stepper.current_time() < target) stepper.do_step(counted);
      stepper.calc_state(target, x);
      t_obs = target;
      observer(std::as_const(x), t_obs);
    }
  } catch (const StepSizeUnderflow& e) {
    sync_counters();
    throw IntegrationFailure(e, c, stepper.current_time());
  }
  sync_counters();
  return detail::make_report(c, x, t_obs);
}

/**
 * Observe on t0 + k dt for k = 0 .. floor((t1 - t0) / dt).
 *
 * Plain steppers take fixed steps of dt (FSAL steppers reuse the last
 * stage). Controlled steppers step adaptively between grid points starting
 * from dt. Dense-output steppers forward to integrate_const_dense.
 */
template <class Stepper, class System, class State, class Observer = NullObserver>
IntegrationReport<State> integrate_const(Stepper& stepper, System&& system, State& x,
                                         double t0, double t1, double dt,
                                         Observer&& observer = {}) {
  if constexpr (DenseOutputStepper<Stepper>) {
    return integrate_const_dense(stepper, system, x, t0, t1, dt, observer);
  } else {
    detail::check_interval(t0, t1, dt, "integrate_const");
    IntegrationCounters c;
    auto counted = detail::with_counter(system, c.system_evaluations);
    const std::size_t n = detail::grid_steps(t0, t1, dt);
    observer(std::as_const(x), t0);
    double t = t0;

    if constexpr (ControlledStepper<Stepper>) {
      double dt_ctrl = dt;
      try {
        for (std::size_t k = 1; k <= n; ++k) {
          const double target = detail::grid_time(t0, t1, dt, k);
          detail::advance_adaptive(stepper, counted, x, t, target, dt_ctrl, c,
                                   [](const State&, double) {});
          observer(std::as_const(x), t);
        }
      } catch (const StepSizeUnderflow& e) {
        throw IntegrationFailure(e, c, t);
      }
    } else {
      static_assert(PlainStepper<Stepper>, "integrate_const needs a stepper category tag");
      if constexpr (FsalStepper<Stepper>) {
        auto dxdt = Stepper::algebra_type::clone_shape(x);
        counted(std::as_const(x), dxdt, t);
        for (std::size_t k = 1; k <= n; ++k) {
          stepper.do_step(counted, x, dxdt, t, x, dxdt, dt);
          t = detail::grid_time(t0, t1, dt, k);
          ++c.steps_accepted;
          observer(std::as_const(x), t);
        }
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          stepper.do_step(counted, x, t, dt);
          t = detail::grid_time(t0, t1, dt, k);
          ++c.steps_accepted;
          observer(std::as_const(x), t);
        }
      }
      c.steps_attempted = c.steps_accepted;
    }
    return detail::make_report(c, x, t);
  }
}

}  // namespace odekit

/**
 * @file explicit_euler.hpp
 * @brief First-order explicit Euler stepper.
 */
#pragma once

#include "odekit/algebra.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State>
class ExplicitEuler {
 public:
  using state_type = State;
  using deriv_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = stepper_tag;

  static constexpr StepperOrderInfo order_info() { return {1, 0, 1}; }
  static constexpr int order() { return 1; }

  template <class System>
  void do_step(System&& system, State& x, time_type t, time_type dt) {
    do_step(system, x, t, x, dt);
  }

  /// out = in + dt * f(in, t). out may be the same object as in.
  template <class System>
  void do_step(System&& system, const State& in, time_type t, State& out, time_type dt) {
    Algebra::resize_like(dxdt_, in);
    system(in, dxdt_, t);
    Algebra::resize_like(out, in);
    Algebra::scale_sum(out, std::array<value_type, 2>{1, dt}, in, dxdt_);
  }

 private:
  deriv_type dxdt_{};
};

}  // namespace odekit

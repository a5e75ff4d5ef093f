/**
 * @file explicit_rk4.hpp
 * @brief Classical four-stage Runge-Kutta stepper.
 */
#pragma once

#include "odekit/algebra.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State>
class ExplicitRk4 {
 public:
  using state_type = State;
  using deriv_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = stepper_tag;

  static constexpr StepperOrderInfo order_info() { return {4, 0, 4}; }
  static constexpr int order() { return 4; }

  template <class System>
  void do_step(System&& system, State& x, time_type t, time_type dt) {
    do_step(system, x, t, x, dt);
  }

  template <class System>
  void do_step(System&& system, const State& in, time_type t, State& out, time_type dt) {
    resize(in);
    const time_type half = dt / 2;

    system(in, k1_, t);
    Algebra::scale_sum(tmp_, std::array<value_type, 2>{1, half}, in, k1_);
    system(tmp_, k2_, t + half);
    Algebra::scale_sum(tmp_, std::array<value_type, 2>{1, half}, in, k2_);
    system(tmp_, k3_, t + half);
    Algebra::scale_sum(tmp_, std::array<value_type, 2>{1, dt}, in, k3_);
    system(tmp_, k4_, t + dt);

    // Average the slopes before scaling by dt so constant fields step exactly.
    Algebra::for_each(
        tmp_, [](value_type a, value_type b, value_type c, value_type d) {
          return (a + 2 * b + 2 * c + d) / 6;
        },
        k1_, k2_, k3_, k4_);
    Algebra::resize_like(out, in);
    Algebra::scale_sum(out, std::array<value_type, 2>{1, dt}, in, tmp_);
  }

 private:
  void resize(const State& ref) {
    Algebra::resize_like(k1_, ref);
    Algebra::resize_like(k2_, ref);
    Algebra::resize_like(k3_, ref);
    Algebra::resize_like(k4_, ref);
    Algebra::resize_like(tmp_, ref);
  }

  deriv_type k1_{}, k2_{}, k3_{}, k4_{};
  State tmp_{};
};

}  // namespace odekit

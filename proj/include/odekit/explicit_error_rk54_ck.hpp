/**
 * @file explicit_error_rk54_ck.hpp
 * @brief Cash-Karp 5(4) stepper with embedded error estimate.
 */
#pragma once

#include <array>

#include "odekit/algebra.hpp"
#include "odekit/butcher_tableau.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

/// Six-stage Cash-Karp pair. Propagates the fifth-order solution; xerr is
/// the difference to the embedded fourth-order solution.
template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State>
class ExplicitErrorRk54Ck {
 public:
  using state_type = State;
  using deriv_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = error_stepper_tag;
  static constexpr bool is_fsal = false;

  static constexpr StepperOrderInfo order_info() { return {5, 4, 6}; }
  static constexpr int order() { return 5; }

  template <class System>
  void do_step(System&& system, State& x, time_type t, time_type dt) {
    step(system, x, nullptr, t, x, dt, nullptr);
  }

  template <class System>
  void do_step(System&& system, const State& in, time_type t, State& out, time_type dt) {
    step(system, in, nullptr, t, out, dt, nullptr);
  }

  template <class System>
  void do_step(System&& system, State& x, time_type t, time_type dt, State& xerr) {
    step(system, x, nullptr, t, x, dt, &xerr);
  }

  template <class System>
  void do_step(System&& system, const State& in, time_type t, State& out, time_type dt,
               State& xerr) {
    step(system, in, nullptr, t, out, dt, &xerr);
  }

  /// Variant reusing a caller-computed dxdt = f(in, t) as the first stage.
  template <class System>
  void do_step(System&& system, const State& in, const deriv_type& dxdt, time_type t,
               State& out, time_type dt, State& xerr) {
    step(system, in, &dxdt, t, out, dt, &xerr);
  }

 private:
  template <class System>
  void step(System& system, const State& in, const deriv_type* dxdt, time_type t,
            State& out, time_type dt, State* xerr) {
    constexpr auto& tab = cash_karp_tableau;
    using C = value_type;
    for (auto& k : k_) Algebra::resize_like(k, in);
    Algebra::resize_like(tmp_, in);

    if (dxdt != nullptr) {
      Algebra::assign(k_[0], *dxdt);
    } else {
      system(in, k_[0], t);
    }

    Algebra::scale_sum(tmp_, std::array<C, 2>{1, dt * tab.a[1][0]}, in, k_[0]);
    system(tmp_, k_[1], t + tab.c[1] * dt);

    Algebra::scale_sum(tmp_, std::array<C, 3>{1, dt * tab.a[2][0], dt * tab.a[2][1]}, in,
                       k_[0], k_[1]);
    system(tmp_, k_[2], t + tab.c[2] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 4>{1, dt * tab.a[3][0], dt * tab.a[3][1],
                                        dt * tab.a[3][2]},
                       in, k_[0], k_[1], k_[2]);
    system(tmp_, k_[3], t + tab.c[3] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 5>{1, dt * tab.a[4][0], dt * tab.a[4][1],
                                        dt * tab.a[4][2], dt * tab.a[4][3]},
                       in, k_[0], k_[1], k_[2], k_[3]);
    system(tmp_, k_[4], t + tab.c[4] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 6>{1, dt * tab.a[5][0], dt * tab.a[5][1],
                                        dt * tab.a[5][2], dt * tab.a[5][3],
                                        dt * tab.a[5][4]},
                       in, k_[0], k_[1], k_[2], k_[3], k_[4]);
    system(tmp_, k_[5], t + tab.c[5] * dt);

    // b[1] and b[4] vanish.
    Algebra::resize_like(out, in);
    Algebra::scale_sum(out,
                       std::array<C, 5>{1, dt * tab.b[0], dt * tab.b[2], dt * tab.b[3],
                                        dt * tab.b[5]},
                       in, k_[0], k_[2], k_[3], k_[5]);

    if (xerr != nullptr) {
      Algebra::resize_like(*xerr, in);
      Algebra::scale_sum(*xerr,
                         std::array<C, 5>{dt * (tab.b[0] - tab.b_embedded[0]),
                                          dt * (tab.b[2] - tab.b_embedded[2]),
                                          dt * (tab.b[3] - tab.b_embedded[3]),
                                          dt * (tab.b[4] - tab.b_embedded[4]),
                                          dt * (tab.b[5] - tab.b_embedded[5])},
                         k_[0], k_[2], k_[3], k_[4], k_[5]);
    }
  }

  std::array<deriv_type, 6> k_{};
  State tmp_{};
};

}  // namespace odekit

/**
 * @file explicit_error_dopri5.hpp
 * @brief Dormand-Prince 5(4) stepper with FSAL support and stage record.
 */
#pragma once

#include <array>

#include "odekit/algebra.hpp"
#include "odekit/butcher_tableau.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

/// Stage derivatives of the most recent Dormand-Prince step. k[6] is the
/// derivative at the new point.
template <class State>
struct StageRecord {
  std::array<State, 7> k{};
};

/**
 * Seven-stage Dormand-Prince pair. The last stage is f(x_new, t + dt), so
 * chaining steps through the dxdt_in / dxdt_out overloads costs six system
 * evaluations per step instead of seven.
 *
 * The overloads without dxdt_in always evaluate f(in, t) afresh. Use them
 * whenever the state was modified between steps.
 */
template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State>
class ExplicitErrorDopri5 {
 public:
  using state_type = State;
  using deriv_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = error_stepper_tag;
  static constexpr bool is_fsal = true;

  static constexpr StepperOrderInfo order_info() { return {5, 4, 7}; }
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

  /// FSAL step: dxdt_in must equal f(in, t); dxdt_out receives f(out, t + dt).
  /// dxdt_out may be the same object as dxdt_in.
  template <class System>
  void do_step(System&& system, const State& in, const deriv_type& dxdt_in, time_type t,
               State& out, deriv_type& dxdt_out, time_type dt) {
    step(system, in, &dxdt_in, t, out, dt, nullptr);
    Algebra::assign(dxdt_out, stages_.k[6]);
  }

  template <class System>
  void do_step(System&& system, const State& in, const deriv_type& dxdt_in, time_type t,
               State& out, deriv_type& dxdt_out, time_type dt, State& xerr) {
    step(system, in, &dxdt_in, t, out, dt, &xerr);
    Algebra::assign(dxdt_out, stages_.k[6]);
  }

  const StageRecord<State>& stages() const noexcept { return stages_; }

 private:
  template <class System>
  void step(System& system, const State& in, const deriv_type* dxdt, time_type t,
            State& out, time_type dt, State* xerr) {
    constexpr auto& tab = dormand_prince_tableau;
    using C = value_type;
    auto& k = stages_.k;
    for (auto& s : k) Algebra::resize_like(s, in);
    Algebra::resize_like(tmp_, in);

    if (dxdt != nullptr) {
      Algebra::assign(k[0], *dxdt);
    } else {
      system(in, k[0], t);
    }

    Algebra::scale_sum(tmp_, std::array<C, 2>{1, dt * tab.a[1][0]}, in, k[0]);
    system(tmp_, k[1], t + tab.c[1] * dt);

    Algebra::scale_sum(tmp_, std::array<C, 3>{1, dt * tab.a[2][0], dt * tab.a[2][1]}, in,
                       k[0], k[1]);
    system(tmp_, k[2], t + tab.c[2] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 4>{1, dt * tab.a[3][0], dt * tab.a[3][1],
                                        dt * tab.a[3][2]},
                       in, k[0], k[1], k[2]);
    system(tmp_, k[3], t + tab.c[3] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 5>{1, dt * tab.a[4][0], dt * tab.a[4][1],
                                        dt * tab.a[4][2], dt * tab.a[4][3]},
                       in, k[0], k[1], k[2], k[3]);
    system(tmp_, k[4], t + tab.c[4] * dt);

    Algebra::scale_sum(tmp_,
                       std::array<C, 6>{1, dt * tab.a[5][0], dt * tab.a[5][1],
                                        dt * tab.a[5][2], dt * tab.a[5][3],
                                        dt * tab.a[5][4]},
                       in, k[0], k[1], k[2], k[3], k[4]);
    system(tmp_, k[5], t + dt);

    // The last stage point is the new solution (b = a[6], b[1] = 0).
    Algebra::resize_like(out, in);
    Algebra::scale_sum(out,
                       std::array<C, 6>{1, dt * tab.b[0], dt * tab.b[2], dt * tab.b[3],
                                        dt * tab.b[4], dt * tab.b[5]},
                       in, k[0], k[2], k[3], k[4], k[5]);
    system(out, k[6], t + dt);

    if (xerr != nullptr) {
      Algebra::resize_like(*xerr, in);
      Algebra::scale_sum(*xerr,
                         std::array<C, 6>{dt * (tab.b[0] - tab.b_embedded[0]),
                                          dt * (tab.b[2] - tab.b_embedded[2]),
                                          dt * (tab.b[3] - tab.b_embedded[3]),
                                          dt * (tab.b[4] - tab.b_embedded[4]),
                                          dt * (tab.b[5] - tab.b_embedded[5]),
                                          dt * (tab.b[6] - tab.b_embedded[6])},
                         k[0], k[2], k[3], k[4], k[5], k[6]);
    }
  }

  StageRecord<State> stages_{};
  State tmp_{};
};

}  // namespace odekit

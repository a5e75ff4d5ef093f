/**
 * @file symplectic_euler.hpp
 * @brief First-order symplectic Euler for separable Hamiltonians.
 */
#pragma once

#include <array>
#include <ranges>

#include "odekit/algebra.hpp"
#include "odekit/errors.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

/// Phase-space point: coordinates q and momenta p of equal length.
template <class State>
struct PairState {
  State q{};
  State p{};

  friend bool operator==(const PairState&, const PairState&) = default;
};

/// H(q, p) = T(p) + V(q). coordinate_rhs(p, dqdt) fills dH/dp;
/// momentum_rhs(q, dpdt) fills -dH/dq.
template <class CoordinateRhs, class MomentumRhs>
struct SeparableHamiltonian {
  CoordinateRhs coordinate_rhs;
  MomentumRhs momentum_rhs;
};

template <class C, class M>
SeparableHamiltonian(C, M) -> SeparableHamiltonian<C, M>;

/**
 * Kick then drift:
 *   p_new = p + dt * momentum_rhs(q)
 *   q_new = q + dt * coordinate_rhs(p_new)
 */
template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State>
class SymplecticEuler {
 public:
  using state_type = PairState<State>;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = stepper_tag;

  static constexpr StepperOrderInfo order_info() { return {1, 0, 1}; }
  static constexpr int order() { return 1; }

  template <class System>
  void do_step(System&& system, state_type& s, time_type t, time_type dt) {
    do_step(system, s, t, s, dt);
  }

  template <class System>
  void do_step(System&& system, const state_type& in, time_type /*t*/, state_type& out,
               time_type dt) {
    if (std::ranges::size(in.q) != std::ranges::size(in.p)) {
      throw DimensionError("symplectic Euler: q and p differ in length");
    }
    Algebra::resize_like(dpdt_, in.p);
    Algebra::resize_like(dqdt_, in.q);
    Algebra::resize_like(out.p, in.p);
    Algebra::resize_like(out.q, in.q);

    system.momentum_rhs(in.q, dpdt_);
    // q is read before out.p is written, so in/out may alias.
    Algebra::scale_sum(out.p, std::array<value_type, 2>{1, dt}, in.p, dpdt_);
    system.coordinate_rhs(out.p, dqdt_);
    Algebra::scale_sum(out.q, std::array<value_type, 2>{1, dt}, in.q, dqdt_);
  }

 private:
  State dqdt_{};
  State dpdt_{};
};

}  // namespace odekit

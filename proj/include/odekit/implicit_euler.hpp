/**
 * @file implicit_euler.hpp
 * @brief Backward Euler with Newton iteration for stiff systems.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ranges>
#include <span>

#include "odekit/algebra.hpp"
#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"
#include "odekit/stepper_categories.hpp"

namespace odekit {

/// Right-hand side rhs(x, dxdt, t) paired with jacobian(x, J, t), where J is
/// an n x n DenseMatrix receiving df_i/dx_j.
template <class Rhs, class Jacobian>
struct JacobianSystem {
  Rhs rhs;
  Jacobian jacobian;
};

template <class Rhs, class Jacobian>
JacobianSystem(Rhs, Jacobian) -> JacobianSystem<Rhs, Jacobian>;

struct NewtonParams {
  /// Applied to max-norms, scaled by max(1, |x|_inf).
  double tol = 1e-12;
  std::size_t max_iter = 50;

  void validate() const {
    if (!(tol > 0.0)) throw ParameterError("Newton tolerance must be positive");
    if (max_iter < 1) throw ParameterError("Newton max_iter must be >= 1");
  }
};

/**
 * Solves x_new = x + dt f(x_new, t + dt) by full Newton iteration on
 * G(u) = u - x - dt f(u, t + dt) with matrix I - dt J(u), starting from
 * u = x. Stops once a Newton update is within tolerance, or once the
 * residual of an updated iterate is within tolerance or down to the rounding
 * level of evaluating G. Linear systems therefore take a single iteration.
 */
template <class State, class Algebra = RangeAlgebra>
  requires AlgebraFor<Algebra, State> && std::ranges::contiguous_range<State> &&
           std::same_as<scalar_of<State>, double>
class ImplicitEuler {
 public:
  using state_type = State;
  using deriv_type = State;
  using value_type = scalar_of<State>;
  using time_type = value_type;
  using algebra_type = Algebra;
  using stepper_category = stepper_tag;

  explicit ImplicitEuler(NewtonParams params = {}) : params_(params) { params_.validate(); }

  static constexpr StepperOrderInfo order_info() { return {1, 0, 1}; }
  static constexpr int order() { return 1; }

  template <class System>
  void do_step(System&& system, State& x, time_type t, time_type dt) {
    do_step(system, x, t, x, dt);
  }

  template <class System>
  void do_step(System&& system, const State& in, time_type t, State& out, time_type dt) {
    if (!(dt > 0)) throw ParameterError("implicit Euler requires dt > 0");
    const auto n = std::ranges::size(in);
    Algebra::assign(u_, in);
    Algebra::resize_like(f_, in);
    Algebra::resize_like(residual_, in);
    Algebra::resize_like(delta_, in);
    const time_type t_new = t + dt;

    iterations_ = 0;
    for (;;) {
      system.rhs(u_, f_, t_new);
      Algebra::scale_sum(residual_, std::array<value_type, 3>{1, -1, -dt}, u_, in, f_);
      if (iterations_ > 0 && Algebra::norm_inf(residual_) <= residual_tolerance()) break;
      if (iterations_ == params_.max_iter) throw NewtonNonconvergence(iterations_);

      jac_.reset(n);
      system.jacobian(u_, jac_, t_new);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) jac_(i, j) *= -dt;
        jac_(i, i) += 1.0;
      }
      newton_norm_ = jac_.norm_inf();
      lu_.factor(jac_);
      lu_.solve(std::span<const double>(std::ranges::data(residual_), n),
                std::span<double>(std::ranges::data(delta_), n));
      Algebra::scale_sum(u_, std::array<value_type, 2>{1, -1}, u_, delta_);
      ++iterations_;
      if (Algebra::norm_inf(delta_) <= tolerance()) break;
    }
    Algebra::assign(out, u_);
  }

  /// Newton iterations used by the last step.
  std::size_t last_iterations() const noexcept { return iterations_; }
  const NewtonParams& params() const noexcept { return params_; }

 private:
  value_type tolerance() const {
    return static_cast<value_type>(params_.tol) *
           std::max(value_type{1}, Algebra::norm_inf(u_));
  }

  /// Cancellation in G(u) leaves noise of order eps * |I - dt J| * |u|.
  value_type residual_tolerance() const {
    constexpr value_type noise = 16 * std::numeric_limits<value_type>::epsilon();
    const value_type scale = std::max(value_type{1}, Algebra::norm_inf(u_));
    return std::max(tolerance(), noise * newton_norm_ * scale);
  }

  NewtonParams params_;
  value_type newton_norm_ = 1;
  State u_{}, f_{}, residual_{}, delta_{};
  DenseMatrix jac_;
  LuDecomposition lu_;
  std::size_t iterations_ = 0;
};

}  // namespace odekit

/**
 * @file systems.hpp
 * @brief Built-in test systems with Jacobians and closed-form solutions.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include "odekit/algebra.hpp"
#include "odekit/errors.hpp"
#include "odekit/linalg.hpp"

namespace odekit {

namespace detail {
template <class State>
void require_dimension(const State& x, std::size_t n, const char* who) {
  if (std::ranges::size(x) != n) {
    throw DimensionError(std::string(who) + " expects a state of dimension " +
                         std::to_string(n));
  }
}
}  // namespace detail

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

/// dx/dt = (sigma (y - x), rho x - y - x z, -beta z + x y).
struct Lorenz {
  LorenzParams params{};

  template <RangeState State>
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    detail::require_dimension(x, 3, "lorenz");
    detail::require_dimension(dxdt, 3, "lorenz");
    dxdt[0] = params.sigma * (x[1] - x[0]);
    dxdt[1] = params.rho * x[0] - x[1] - x[0] * x[2];
    dxdt[2] = -params.beta * x[2] + x[0] * x[1];
  }

  template <RangeState State>
  void jacobian(const State& x, DenseMatrix& j, double /*t*/) const {
    detail::require_dimension(x, 3, "lorenz");
    j.reset(3);
    j(0, 0) = -params.sigma;
    j(0, 1) = params.sigma;
    j(1, 0) = params.rho - x[2];
    j(1, 1) = -1.0;
    j(1, 2) = -x[0];
    j(2, 0) = x[1];
    j(2, 1) = x[0];
    j(2, 2) = -params.beta;
  }
};

template <RangeState State>
State lorenz_rhs(const State& x, double t, LorenzParams params = {}) {
  State dxdt = RangeAlgebra::clone_shape(x);
  Lorenz{params}(x, dxdt, t);
  return dxdt;
}

/// Unit-frequency oscillator on (q, p): q' = p, p' = -q.
struct HarmonicOscillator {
  template <RangeState State>
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    detail::require_dimension(x, 2, "harmonic");
    dxdt[0] = x[1];
    dxdt[1] = -x[0];
  }

  template <RangeState State>
  void jacobian(const State& /*x*/, DenseMatrix& j, double /*t*/) const {
    j.reset(2);
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
  }

  /// Separable halves: dq/dt = p and dp/dt = -q.
  template <RangeState State>
  static void coordinate_rhs(const State& p, State& dqdt) {
    for (std::size_t i = 0; i < std::ranges::size(p); ++i) dqdt[i] = p[i];
  }
  template <RangeState State>
  static void momentum_rhs(const State& q, State& dpdt) {
    for (std::size_t i = 0; i < std::ranges::size(q); ++i) dpdt[i] = -q[i];
  }

  static double energy(double q, double p) { return 0.5 * (q * q + p * p); }

  static std::vector<double> exact(const std::vector<double>& x0, double t0, double t) {
    const double c = std::cos(t - t0);
    const double s = std::sin(t - t0);
    return {x0[0] * c + x0[1] * s, -x0[0] * s + x0[1] * c};
  }
};

/// x' = rate * x, element-wise.
struct Exponential {
  double rate = 1.0;

  template <RangeState State>
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    for (std::size_t i = 0; i < std::ranges::size(x); ++i) dxdt[i] = rate * x[i];
  }

  template <RangeState State>
  void jacobian(const State& x, DenseMatrix& j, double /*t*/) const {
    j.reset(std::ranges::size(x));
    for (std::size_t i = 0; i < j.size(); ++i) j(i, i) = rate;
  }

  std::vector<double> exact(const std::vector<double>& x0, double t0, double t) const {
    std::vector<double> x(x0);
    const double g = std::exp(rate * (t - t0));
    for (auto& v : x) v *= g;
    return x;
  }
};

/**
 * Linear 2x2 system x' = A x with eigenvalues slow and fast, eigenvectors
 * (1, 1) and (1, -1):
 *   A = 1/2 [[slow + fast, slow - fast], [slow - fast, slow + fast]].
 */
struct StiffLinear2 {
  double slow = -1.0;
  double fast = -1.0e6;

  double a_diag() const { return 0.5 * (slow + fast); }
  double a_off() const { return 0.5 * (slow - fast); }

  template <RangeState State>
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    detail::require_dimension(x, 2, "stiff2");
    const double d = a_diag();
    const double o = a_off();
    dxdt[0] = d * x[0] + o * x[1];
    dxdt[1] = o * x[0] + d * x[1];
  }

  template <RangeState State>
  void jacobian(const State& /*x*/, DenseMatrix& j, double /*t*/) const {
    j.reset(2);
    j(0, 0) = j(1, 1) = a_diag();
    j(0, 1) = j(1, 0) = a_off();
  }

  std::vector<double> exact(const std::vector<double>& x0, double t0, double t) const {
    const double u = 0.5 * (x0[0] + x0[1]);  // slow mode amplitude
    const double w = 0.5 * (x0[0] - x0[1]);  // fast mode amplitude
    const double es = std::exp(slow * (t - t0));
    const double ef = std::exp(fast * (t - t0));
    return {u * es + w * ef, u * es - w * ef};
  }
};

/// A system addressable by name, on std::vector<double> states.
struct NamedSystem {
  using Vec = std::vector<double>;

  std::string name;
  std::string description;
  std::size_t dimension = 0;
  Vec default_x0;
  std::function<void(const Vec&, Vec&, double)> rhs;
  /// Empty when no analytic Jacobian is available.
  std::function<void(const Vec&, DenseMatrix&, double)> jacobian;
  /// exact(x0, t0, t); empty when no closed form is known.
  std::function<Vec(const Vec&, double, double)> exact;
  /// Separable Hamiltonian halves on (q, p) = (first half, second half).
  std::function<void(const Vec&, Vec&)> coordinate_rhs;
  std::function<void(const Vec&, Vec&)> momentum_rhs;

  bool has_jacobian() const { return static_cast<bool>(jacobian); }
  bool has_exact() const { return static_cast<bool>(exact); }
  bool is_hamiltonian() const { return coordinate_rhs && momentum_rhs; }
};

/// lorenz, harmonic, expdecay, stiff2.
const std::vector<NamedSystem>& builtin_systems();
const NamedSystem* find_system(std::string_view name);
std::vector<std::string> system_names();

}  // namespace odekit

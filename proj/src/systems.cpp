#include "odekit/systems.hpp"

#include <algorithm>

namespace odekit {

namespace {

std::vector<NamedSystem> make_builtins() {
  using Vec = NamedSystem::Vec;
  std::vector<NamedSystem> out;

  {
    NamedSystem s;
    s.name = "lorenz";
    s.description = "Lorenz attractor, sigma=10 rho=28 beta=8/3";
    s.dimension = 3;
    s.default_x0 = {10.0, 10.0, 10.0};
    s.rhs = [](const Vec& x, Vec& d, double t) { Lorenz{}(x, d, t); };
    s.jacobian = [](const Vec& x, DenseMatrix& j, double t) { Lorenz{}.jacobian(x, j, t); };
    out.push_back(std::move(s));
  }
  {
    NamedSystem s;
    s.name = "harmonic";
    s.description = "harmonic oscillator q' = p, p' = -q";
    s.dimension = 2;
    s.default_x0 = {1.0, 0.0};
    s.rhs = [](const Vec& x, Vec& d, double t) { HarmonicOscillator{}(x, d, t); };
    s.jacobian = [](const Vec& x, DenseMatrix& j, double t) {
      HarmonicOscillator{}.jacobian(x, j, t);
    };
    s.exact = &HarmonicOscillator::exact;
    s.coordinate_rhs = [](const Vec& p, Vec& dq) { HarmonicOscillator::coordinate_rhs(p, dq); };
    s.momentum_rhs = [](const Vec& q, Vec& dp) { HarmonicOscillator::momentum_rhs(q, dp); };
    out.push_back(std::move(s));
  }
  {
    NamedSystem s;
    s.name = "expdecay";
    s.description = "exponential decay x' = -x";
    s.dimension = 1;
    s.default_x0 = {1.0};
    const Exponential sys{-1.0};
    s.rhs = [sys](const Vec& x, Vec& d, double t) { sys(x, d, t); };
    s.jacobian = [sys](const Vec& x, DenseMatrix& j, double t) { sys.jacobian(x, j, t); };
    s.exact = [sys](const Vec& x0, double t0, double t) { return sys.exact(x0, t0, t); };
    out.push_back(std::move(s));
  }
  {
    NamedSystem s;
    s.name = "stiff2";
    s.description = "linear 2x2 system with eigenvalues -1 and -1e6";
    s.dimension = 2;
    s.default_x0 = {1.0, 0.0};
    const StiffLinear2 sys{};
    s.rhs = [sys](const Vec& x, Vec& d, double t) { sys(x, d, t); };
    s.jacobian = [sys](const Vec& x, DenseMatrix& j, double t) { sys.jacobian(x, j, t); };
    s.exact = [sys](const Vec& x0, double t0, double t) { return sys.exact(x0, t0, t); };
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

const std::vector<NamedSystem>& builtin_systems() {
  static const std::vector<NamedSystem> systems = make_builtins();
  return systems;
}

const NamedSystem* find_system(std::string_view name) {
  const auto& all = builtin_systems();
  const auto it = std::ranges::find(all, name, &NamedSystem::name);
  return it == all.end() ? nullptr : &*it;
}

std::vector<std::string> system_names() {
  std::vector<std::string> names;
  for (const auto& s : builtin_systems()) names.push_back(s.name);
  return names;
}

}  // namespace odekit

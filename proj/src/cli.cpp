#include "odekit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "odekit/controlled_error_stepper.hpp"
#include "odekit/convergence.hpp"
#include "odekit/csv.hpp"
#include "odekit/dense_output_dopri5.hpp"
#include "odekit/errors.hpp"
#include "odekit/explicit_error_dopri5.hpp"
#include "odekit/explicit_error_rk54_ck.hpp"
#include "odekit/explicit_euler.hpp"
#include "odekit/explicit_rk4.hpp"
#include "odekit/implicit_euler.hpp"
#include "odekit/integrate.hpp"
#include "odekit/symplectic_euler.hpp"
#include "odekit/systems.hpp"

namespace odekit::cli {

namespace {

using Vec = std::vector<double>;

enum class StepperKind {
  euler,
  rk4,
  rk54_ck,
  dopri5,
  dopri5_dense,
  implicit_euler,
  symplectic_euler
};

constexpr std::pair<const char*, StepperKind> kSteppers[] = {
    {"euler", StepperKind::euler},
    {"rk4", StepperKind::rk4},
    {"rk54_ck", StepperKind::rk54_ck},
    {"dopri5", StepperKind::dopri5},
    {"dopri5_dense", StepperKind::dopri5_dense},
    {"implicit_euler", StepperKind::implicit_euler},
    {"symplectic_euler", StepperKind::symplectic_euler},
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string system;
  std::vector<std::string> steppers;
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 0.01;
  double atol = 1e-6;
  double rtol = 1e-6;
  Vec x0;
  std::string out_path;
  bool adaptive = false;
  std::size_t levels = 4;
};

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

const NamedSystem& lookup_system(const std::string& name) {
  if (const auto* sys = find_system(name)) return *sys;
  throw UsageError("unknown system '" + name + "'; valid systems: " + join(system_names()));
}

StepperKind lookup_stepper(const std::string& name) {
  for (const auto& [n, kind] : kSteppers) {
    if (name == n) return kind;
  }
  throw UsageError("unknown stepper '" + name + "'; valid steppers: " +
                   join(stepper_names()));
}

const char* name_of(StepperKind kind) {
  for (const auto& [n, k] : kSteppers) {
    if (k == kind) return n;
  }
  return "?";
}

bool compatible(StepperKind kind, const NamedSystem& sys) {
  if (kind == StepperKind::implicit_euler) return sys.has_jacobian();
  if (kind == StepperKind::symplectic_euler) return sys.is_hamiltonian();
  return true;
}

void require_compatible(StepperKind kind, const NamedSystem& sys) {
  if (kind == StepperKind::implicit_euler && !sys.has_jacobian()) {
    throw UsageError("stepper implicit_euler needs a Jacobian; system '" + sys.name +
                     "' has none");
  }
  if (kind == StepperKind::symplectic_euler && !sys.is_hamiltonian()) {
    throw UsageError("stepper symplectic_euler needs a separable Hamiltonian system; '" +
                     sys.name + "' is not one");
  }
}

Vec initial_state(const RunConfig& cfg, const NamedSystem& sys) {
  if (cfg.x0.empty()) return sys.default_x0;
  if (cfg.x0.size() != sys.dimension) {
    throw UsageError("--x0 has " + std::to_string(cfg.x0.size()) + " values; system '" +
                     sys.name + "' has dimension " + std::to_string(sys.dimension));
  }
  return cfg.x0;
}

void validate_common(const RunConfig& cfg) {
  if (!std::isfinite(cfg.t0) || !std::isfinite(cfg.t1) || !(cfg.t1 > cfg.t0)) {
    throw UsageError("--t1 must be greater than --t0");
  }
  if (!std::isfinite(cfg.dt) || !(cfg.dt > 0.0)) throw UsageError("--dt must be positive");
  if (!(cfg.atol >= 0.0) || !(cfg.rtol >= 0.0) || !(cfg.atol + cfg.rtol > 0.0)) {
    throw UsageError("--atol and --rtol must be >= 0 and not both zero");
  }
}

PairState<Vec> split(const Vec& x) {
  const auto half = static_cast<std::ptrdiff_t>(x.size() / 2);
  return {Vec(x.begin(), x.begin() + half), Vec(x.begin() + half, x.end())};
}

Vec flatten(const PairState<Vec>& s) {
  Vec x(s.q);
  x.insert(x.end(), s.p.begin(), s.p.end());
  return x;
}

ControllerParams controller_params(const RunConfig& cfg) {
  ControllerParams p;
  p.atol = cfg.atol;
  p.rtol = cfg.rtol;
  return p;
}

struct RunResult {
  IntegrationCounters counters;
  double final_time = 0.0;
};

template <class Report>
RunResult to_result(const Report& r) {
  return {static_cast<const IntegrationCounters&>(r), r.final_time};
}

/// Integrate sys over [t0, t1] with the chosen stepper; x holds the final state.
template <class Observer>
RunResult run_integration(const RunConfig& cfg, const NamedSystem& sys, StepperKind kind,
                          Vec& x, Observer&& obs) {
  const auto& rhs = sys.rhs;
  switch (kind) {
    case StepperKind::euler: {
      ExplicitEuler<Vec> st;
      return to_result(integrate_const(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::rk4: {
      ExplicitRk4<Vec> st;
      return to_result(integrate_const(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::rk54_ck: {
      ControlledErrorStepper<ExplicitErrorRk54Ck<Vec>> st(controller_params(cfg));
      if (cfg.adaptive) {
        return to_result(integrate_adaptive(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
      }
      return to_result(integrate_const(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::dopri5: {
      ControlledErrorStepper<ExplicitErrorDopri5<Vec>> st(controller_params(cfg));
      if (cfg.adaptive) {
        return to_result(integrate_adaptive(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
      }
      return to_result(integrate_const(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::dopri5_dense: {
      DenseOutputDopri5<Vec> st(controller_params(cfg));
      return to_result(integrate_const(st, rhs, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::implicit_euler: {
      ImplicitEuler<Vec> st;
      JacobianSystem system{std::cref(sys.rhs), std::cref(sys.jacobian)};
      return to_result(integrate_const(st, system, x, cfg.t0, cfg.t1, cfg.dt, obs));
    }
    case StepperKind::symplectic_euler: {
      SymplecticEuler<Vec> st;
      SeparableHamiltonian system{std::cref(sys.coordinate_rhs), std::cref(sys.momentum_rhs)};
      auto s = split(x);
      const auto r = integrate_const(st, system, s, cfg.t0, cfg.t1, cfg.dt, obs);
      x = flatten(s);
      return to_result(r);
    }
  }
  throw std::logic_error("unhandled stepper kind");
}

int cmd_integrate(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto& sys = lookup_system(cfg.system);
  if (cfg.steppers.size() != 1) throw UsageError("integrate takes exactly one --stepper");
  const auto kind = lookup_stepper(cfg.steppers.front());
  require_compatible(kind, sys);
  if (cfg.adaptive && kind != StepperKind::rk54_ck && kind != StepperKind::dopri5) {
    throw UsageError("--adaptive needs a controlled stepper (rk54_ck or dopri5)");
  }
  Vec x = initial_state(cfg, sys);

  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + cfg.out_path + "'");
    os = &file;
  }
  write_csv_header(*os, sys.dimension);
  run_integration(cfg, sys, kind, x, CsvObserver(*os));
  os->flush();
  return exit_ok;
}

int cmd_order(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto& sys = lookup_system(cfg.system);
  if (cfg.steppers.size() != 1) throw UsageError("order takes exactly one --stepper");
  const auto kind = lookup_stepper(cfg.steppers.front());
  require_compatible(kind, sys);
  if (!sys.has_exact()) {
    throw UsageError("system '" + sys.name + "' has no closed-form solution to compare with");
  }
  if (cfg.levels < 3) throw UsageError("--levels must be at least 3");
  const Vec x0 = initial_state(cfg, sys);
  const auto dts = halving_steps(cfg.dt, cfg.levels);
  auto exact = [&](double t) { return sys.exact(x0, cfg.t0, t); };

  OrderEstimate est;
  switch (kind) {
    case StepperKind::euler: {
      ExplicitEuler<Vec> st;
      est = observed_order(st, sys.rhs, exact, x0, cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::rk4: {
      ExplicitRk4<Vec> st;
      est = observed_order(st, sys.rhs, exact, x0, cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::rk54_ck: {
      ExplicitErrorRk54Ck<Vec> st;
      est = observed_order(st, sys.rhs, exact, x0, cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::dopri5: {
      ExplicitErrorDopri5<Vec> st;
      est = observed_order(st, sys.rhs, exact, x0, cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::implicit_euler: {
      ImplicitEuler<Vec> st;
      JacobianSystem system{std::cref(sys.rhs), std::cref(sys.jacobian)};
      est = observed_order(st, system, exact, x0, cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::symplectic_euler: {
      SymplecticEuler<Vec> st;
      SeparableHamiltonian system{std::cref(sys.coordinate_rhs), std::cref(sys.momentum_rhs)};
      auto exact_pair = [&](double t) { return split(exact(t)); };
      est = observed_order(st, system, exact_pair, split(x0), cfg.t0, cfg.t1, dts);
      break;
    }
    case StepperKind::dopri5_dense:
      throw UsageError("order needs a fixed-step stepper; dopri5_dense controls its own steps");
  }

  std::string text = "dt,global_error,used\n";
  for (const auto& s : est.samples) {
    text += format_scalar(s.dt) + "," + format_scalar(s.error) + "," + (s.used ? "1" : "0") +
            "\n";
  }
  text += "slope," + (std::isnan(est.slope) ? std::string("nan") : format_scalar(est.slope)) +
          "\n";
  if (est.underflow) text += "underflow,1\n";
  out << text;
  return exit_ok;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto& sys = lookup_system(cfg.system);
  std::vector<StepperKind> kinds;
  if (cfg.steppers.empty()) {
    for (const auto& [n, kind] : kSteppers) {
      if (compatible(kind, sys)) kinds.push_back(kind);
    }
  } else {
    for (const auto& name : cfg.steppers) {
      const auto kind = lookup_stepper(name);
      require_compatible(kind, sys);
      kinds.push_back(kind);
    }
  }
  const Vec x0 = initial_state(cfg, sys);

  out << "stepper,steps_attempted,steps_accepted,steps_rejected,system_evaluations,"
         "final_time,seconds\n";
  for (const auto kind : kinds) {
    Vec x = x0;
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_integration(cfg, sys, kind, x, NullObserver{});
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    const auto& c = r.counters;
    out << name_of(kind) << ',' << c.steps_attempted << ',' << c.steps_accepted << ','
        << c.steps_rejected << ',' << c.system_evaluations << ','
        << format_scalar(r.final_time) << ',' << format_scalar(elapsed.count()) << '\n';
  }
  return exit_ok;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--system", cfg.system, "system: " + join(system_names()))->required();
  cmd->add_option("--t0", cfg.t0, "start time")->capture_default_str();
  cmd->add_option("--t1", cfg.t1, "end time")->capture_default_str();
  cmd->add_option("--atol", cfg.atol, "absolute tolerance")->capture_default_str();
  cmd->add_option("--rtol", cfg.rtol, "relative tolerance")->capture_default_str();
  cmd->add_option("--x0", cfg.x0, "initial condition, comma separated")->delimiter(',');
}

}  // namespace

std::vector<std::string> stepper_names() {
  std::vector<std::string> names;
  for (const auto& [n, kind] : kSteppers) names.emplace_back(n);
  return names;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"odekit: ODE integration, convergence studies and benchmarks", "odekit"};
  app.require_subcommand(1);

  RunConfig integrate_cfg;
  integrate_cfg.t1 = 10.0;
  auto* integrate = app.add_subcommand("integrate", "write a trajectory as CSV");
  add_common(integrate, integrate_cfg);
  integrate->add_option("--stepper", integrate_cfg.steppers, "stepper: " + join(stepper_names()))
      ->required()
      ->expected(1);
  integrate->add_option("--dt", integrate_cfg.dt, "step / observation interval")
      ->capture_default_str();
  integrate->add_option("--out", integrate_cfg.out_path, "output file (default stdout)");
  integrate->add_flag("--adaptive", integrate_cfg.adaptive,
                      "observe every accepted step of a controlled stepper");

  RunConfig order_cfg;
  order_cfg.dt = 0.1;
  auto* order = app.add_subcommand("order", "estimate the convergence order");
  add_common(order, order_cfg);
  order->add_option("--stepper", order_cfg.steppers, "stepper: " + join(stepper_names()))
      ->required()
      ->expected(1);
  order->add_option("--dt", order_cfg.dt, "largest step; halved per level")
      ->capture_default_str();
  order->add_option("--levels", order_cfg.levels, "number of step sizes")->capture_default_str();

  RunConfig bench_cfg;
  bench_cfg.t1 = 10.0;
  auto* bench = app.add_subcommand("bench", "report step and evaluation counters");
  add_common(bench, bench_cfg);
  bench->add_option("--stepper", bench_cfg.steppers, "steppers (default: all applicable)")
      ->delimiter(',');
  bench->add_option("--dt", bench_cfg.dt, "fixed step / initial step")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*integrate) return cmd_integrate(integrate_cfg, out);
    if (*order) return cmd_order(order_cfg, out);
    return cmd_bench(bench_cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const StepSizeUnderflow& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const NewtonNonconvergence& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const SingularMatrixError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

}  // namespace odekit::cli

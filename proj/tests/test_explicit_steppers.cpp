#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "odekit/butcher_tableau.hpp"
#include "odekit/explicit_error_dopri5.hpp"
#include "odekit/explicit_error_rk54_ck.hpp"
#include "odekit/explicit_euler.hpp"
#include "odekit/explicit_rk4.hpp"
#include "odekit/systems.hpp"
#include "oracles.hpp"

using Vec = std::vector<double>;
using namespace odekit;

namespace {

const auto growth = [](const Vec& x, Vec& d, double) { d[0] = x[0]; };
const auto frozen = [](const Vec& x, Vec& d, double) {
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = 0.0;
};
const double e01 = static_cast<double>(oracle::exp_series(0.1L));

/// Global error at t = 1 of x' = x, x(0) = 1, for fixed step dt.
template <class Stepper>
double growth_error(double dt) {
  Stepper st;
  Vec x{1.0};
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < n; ++k) st.do_step(growth, x, k * dt, dt);
  return std::abs(x[0] - static_cast<double>(oracle::exp_series(1.0L)));
}

template <class Stepper>
double measured_order(std::vector<double> dts) {
  std::vector<double> errs;
  for (double dt : dts) errs.push_back(growth_error<Stepper>(dt));
  return oracle::loglog_slope(dts, errs);
}

struct CountingGrowth {
  int* calls;
  void operator()(const Vec& x, Vec& d, double) const {
    ++*calls;
    d[0] = x[0];
  }
};

}  // namespace

TEST_CASE("tableaus are consistent") {
  CHECK(cash_karp_tableau.consistency_defect() < 1e-14);
  CHECK(dormand_prince_tableau.consistency_defect() < 1e-14);
}

TEST_CASE("explicit Euler examples") {
  ExplicitEuler<Vec> st;
  Vec x{1.0};
  st.do_step(growth, x, 0.0, 0.1);
  CHECK(x[0] == doctest::Approx(1.1).epsilon(1e-15));

  Vec y{5, 7};
  st.do_step(frozen, y, 0.0, 1.0);
  CHECK(y == Vec{5, 7});

  // Lorenz at (10,10,10): f = (0, 170, 73.333...) by hand.
  Vec l{10, 10, 10};
  st.do_step(Lorenz{}, l, 0.0, 0.01);
  CHECK(l[0] == 10.0);
  CHECK(l[1] == doctest::Approx(11.7).epsilon(1e-14));
  CHECK(l[2] == doctest::Approx(10.0 + 0.01 * (100.0 - 80.0 / 3.0)).epsilon(1e-14));
  CHECK(l[2] == doctest::Approx(10.733333333333333).epsilon(1e-14));
}

TEST_CASE("explicit Euler propagates NaN from the system") {
  ExplicitEuler<Vec> st;
  Vec x{1.0};
  st.do_step([](const Vec&, Vec& d, double) { d[0] = std::nan(""); }, x, 0.0, 0.1);
  CHECK(std::isnan(x[0]));
}

TEST_CASE("RK4 examples") {
  ExplicitRk4<Vec> st;
  Vec x{3, -2};
  st.do_step(frozen, x, 0.0, 0.7);
  CHECK(x == Vec{3, -2});

  Vec c{0.0};
  st.do_step([](const Vec&, Vec& d, double) { d[0] = 1.0; }, c, 0.0, 0.5);
  CHECK(c[0] == 0.5);
  for (double dt : {0.1, 0.3, 1.0 / 7.0, 2.75}) {
    Vec y{1.25};
    st.do_step([](const Vec&, Vec& d, double) { d[0] = -3.0; }, y, 0.0, dt);
    CHECK(y[0] == 1.25 - 3.0 * dt);
  }

  Vec g{1.0};
  st.do_step(growth, g, 0.0, 0.1);
  CHECK(g[0] == doctest::Approx(oracle::exp_taylor(0.1, 4)).epsilon(1e-15));
  CHECK(g[0] == doctest::Approx(1.1051708333333333).epsilon(1e-15));
}

TEST_CASE("RK4 integrates x' = t^3 exactly") {
  ExplicitRk4<Vec> st;
  Vec x{0.0};
  const auto cubic = [](const Vec&, Vec& d, double t) { d[0] = t * t * t; };
  for (int k = 0; k < 8; ++k) st.do_step(cubic, x, k * 0.125, 0.125);
  CHECK(std::abs(x[0] - 0.25) < 1e-13);
}

TEST_CASE("Cash-Karp examples") {
  ExplicitErrorRk54Ck<Vec> st;
  Vec x{4, 5};
  Vec err;
  st.do_step(frozen, x, 0.0, 0.3, err);
  CHECK(x == Vec{4, 5});
  CHECK(err == Vec{0, 0});

  Vec q{0.0};
  st.do_step([](const Vec&, Vec& d, double t) { d[0] = t * t * t * t; }, q, 0.0, 1.0, err);
  CHECK(std::abs(q[0] - 0.2) < 1e-12);

  Vec g{1.0};
  st.do_step(growth, g, 0.0, 0.1, err);
  CHECK(std::abs(err[0]) < 1e-7);
  CHECK(std::abs(g[0] - e01) < 1e-9);
}

TEST_CASE("Cash-Karp with a supplied derivative matches the plain step") {
  ExplicitErrorRk54Ck<Vec> st;
  const Vec x{1.0, -2.0, 0.5};
  Vec dxdt(3);
  Lorenz{}(x, dxdt, 0.0);
  Vec a, b, ea, eb;
  st.do_step(Lorenz{}, x, 0.0, a, 0.01, ea);
  st.do_step(Lorenz{}, x, dxdt, 0.0, b, 0.01, eb);
  CHECK(a == b);
  CHECK(ea == eb);
}

TEST_CASE("Dormand-Prince examples") {
  ExplicitErrorDopri5<Vec> st;
  Vec x{4, 5};
  Vec err;
  st.do_step(frozen, x, 0.0, 0.3, err);
  CHECK(x == Vec{4, 5});
  CHECK(err == Vec{0, 0});
  for (const auto& k : st.stages().k) CHECK(k == Vec{0, 0});

  Vec g{1.0};
  st.do_step(growth, g, 0.0, 0.1, err);
  CHECK(std::abs(g[0] - e01) < 1e-9);
  // Last stage is the derivative at the new point.
  CHECK(st.stages().k[6][0] == g[0]);
}

TEST_CASE("Dormand-Prince FSAL chaining costs six evaluations per step") {
  int calls = 0;
  const CountingGrowth sys{&calls};
  ExplicitErrorDopri5<Vec> st;
  Vec x{1.0};
  Vec dxdt(1);
  sys(x, dxdt, 0.0);
  Vec err;
  for (int k = 0; k < 10; ++k) st.do_step(sys, x, dxdt, k * 0.1, x, dxdt, 0.1, err);
  CHECK(calls == 61);
  CHECK(std::abs(x[0] - static_cast<double>(oracle::exp_series(1.0L))) < 1e-7);

  // Without the cached derivative every step costs seven.
  calls = 0;
  Vec y{1.0};
  for (int k = 0; k < 10; ++k) st.do_step(sys, y, k * 0.1, 0.1, err);
  CHECK(calls == 70);
  CHECK(y == x);
}

TEST_CASE("property: in-place and out-of-place steps are bit-identical") {
  std::mt19937_64 rng(42);
  const Lorenz lorenz{};
  ExplicitEuler<Vec> eu;
  ExplicitRk4<Vec> rk;
  ExplicitErrorRk54Ck<Vec> ck;
  ExplicitErrorDopri5<Vec> dp;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x0 = oracle::random_vector(rng, 3, -20, 20);
    const double t = std::uniform_real_distribution<double>(0, 10)(rng);
    const double dt = std::uniform_real_distribution<double>(1e-4, 0.02)(rng);
    Vec in_place, out;

    in_place = x0;
    eu.do_step(lorenz, in_place, t, dt);
    eu.do_step(lorenz, x0, t, out, dt);
    CHECK(in_place == out);

    in_place = x0;
    rk.do_step(lorenz, in_place, t, dt);
    rk.do_step(lorenz, x0, t, out, dt);
    CHECK(in_place == out);

    Vec e1, e2;
    in_place = x0;
    ck.do_step(lorenz, in_place, t, dt, e1);
    ck.do_step(lorenz, x0, t, out, dt, e2);
    CHECK(in_place == out);
    CHECK(e1 == e2);

    in_place = x0;
    dp.do_step(lorenz, in_place, t, dt, e1);
    dp.do_step(lorenz, x0, t, out, dt, e2);
    CHECK(in_place == out);
    CHECK(e1 == e2);
  }
}

TEST_CASE("observed convergence orders on x' = x") {
  const std::vector<double> fine{0.1, 0.05, 0.025, 0.0125};
  const std::vector<double> coarse{0.25, 0.125, 0.0625, 0.03125};
  const double euler = measured_order<ExplicitEuler<Vec>>(fine);
  const double rk4 = measured_order<ExplicitRk4<Vec>>(fine);
  const double ck = measured_order<ExplicitErrorRk54Ck<Vec>>(coarse);
  const double dp = measured_order<ExplicitErrorDopri5<Vec>>(coarse);
  MESSAGE("euler " << euler << " rk4 " << rk4 << " ck " << ck << " dp " << dp);
  CHECK(std::abs(euler - 1.0) <= 0.1);
  CHECK(std::abs(rk4 - 4.0) <= 0.2);
  CHECK(std::abs(ck - 5.0) <= 0.3);
  CHECK(std::abs(dp - 5.0) <= 0.3);
}

TEST_CASE("order info") {
  CHECK(ExplicitEuler<Vec>::order() == 1);
  CHECK(ExplicitRk4<Vec>::order_info().stage_count == 4);
  constexpr auto ck = ExplicitErrorRk54Ck<Vec>::order_info();
  constexpr auto dp = ExplicitErrorDopri5<Vec>::order_info();
  CHECK(ck.error_order < ck.order);
  CHECK(dp.error_order < dp.order);
  CHECK(dp.stage_count == 7);
}

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "odekit/implicit_euler.hpp"
#include "odekit/linalg.hpp"
#include "odekit/systems.hpp"
#include "oracles.hpp"

using Vec = std::vector<double>;
using namespace odekit;

namespace {

double vec_norm_inf(const Vec& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Diagonally dominant random matrix.
DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1, 1);
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
    a(i, i) += (dist(rng) < 0 ? -1.0 : 1.0) * static_cast<double>(n);
  }
  return a;
}

bool residual_ok(const DenseMatrix& a, const Vec& x, const Vec& b) {
  Vec ax(b.size());
  multiply(a, x, ax);
  double r = 0;
  for (std::size_t i = 0; i < b.size(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
  return r <= 1e-10 * (a.norm_inf() * vec_norm_inf(x) + vec_norm_inf(b));
}

auto decay(double lambda) {
  return JacobianSystem{
      [lambda](const Vec& x, Vec& d, double) { d[0] = -lambda * x[0]; },
      [lambda](const Vec&, DenseMatrix& j, double) { j(0, 0) = -lambda; }};
}

}  // namespace

TEST_CASE("lu_solve examples") {
  CHECK(lu_solve(DenseMatrix::identity(2), Vec{3, 4}) == Vec{3, 4});
  CHECK(lu_solve(DenseMatrix{{2, 0}, {0, 4}}, Vec{2, 8}) == Vec{1, 2});
  // Needs a row swap.
  const auto x = lu_solve(DenseMatrix{{0, 1}, {1, 0}}, Vec{5, 6});
  CHECK(x == Vec{6, 5});
}

TEST_CASE("lu_solve residual bound on random matrices") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = trial == 0 ? 5 : 1 + trial % 12;
    const DenseMatrix a = random_matrix(rng, n);
    const Vec b = oracle::random_vector(rng, n);
    const Vec x = lu_solve(a, b);
    CHECK(residual_ok(a, x, b));
  }
}

TEST_CASE("lu_solve errors") {
  CHECK_THROWS_AS(lu_solve(DenseMatrix{{1, 2}, {2, 4}}, Vec{1, 1}), SingularMatrixError);
  CHECK_THROWS_AS(lu_solve(DenseMatrix(2), Vec{1, 1}), SingularMatrixError);
  CHECK_THROWS_AS(lu_solve(DenseMatrix::identity(3), Vec{1, 1}), DimensionError);
  CHECK_THROWS_AS((DenseMatrix{{1, 2}, {3}}), DimensionError);
}

TEST_CASE("implicit Euler examples") {
  ImplicitEuler<Vec> st;
  Vec x{2.0, -1.0};
  st.do_step(JacobianSystem{[](const Vec&, Vec& d, double) { d = {0.0, 0.0}; },
                            [](const Vec&, DenseMatrix&, double) {}},
             x, 0.0, 0.5);
  CHECK(x == Vec{2.0, -1.0});
  CHECK(st.last_iterations() == 1);

  Vec stiff{1.0};
  st.do_step(decay(1e6), stiff, 0.0, 1.0);
  CHECK(stiff[0] == doctest::Approx(1.0 / (1.0 + 1e6)).epsilon(1e-12));
  CHECK(stiff[0] == doctest::Approx(9.99999e-7).epsilon(1e-6));

  Vec mild{1.0};
  st.do_step(decay(1.0), mild, 0.0, 0.1);
  CHECK(mild[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-14));
}

TEST_CASE("implicit Euler is A-stable on x' = -lambda x") {
  ImplicitEuler<Vec> st;
  for (double ldt : {1e-3, 1.0, 10.0, 1e3, 1e6, 1e9, 1e12}) {
    Vec x{1.0};
    for (int k = 0; k < 5; ++k) {
      const double before = x[0];
      st.do_step(decay(ldt), x, k, 1.0);
      CHECK(std::abs(x[0]) <= std::abs(before));
    }
  }
}

TEST_CASE("linear systems converge in one Newton iteration") {
  ImplicitEuler<Vec> st;
  Vec x{1.0};
  st.do_step(decay(3.0), x, 0.0, 0.2);
  CHECK(st.last_iterations() == 1);

  const StiffLinear2 stiff{};
  JacobianSystem sys{stiff, [&](const Vec& s, DenseMatrix& j, double t) { stiff.jacobian(s, j, t); }};
  Vec y{1.0, 0.0};
  for (int k = 0; k < 10; ++k) {
    st.do_step(sys, y, 0.1 * k, 0.1);
    CHECK(st.last_iterations() == 1);
  }
  // Fast mode is gone, slow mode decays like (1/1.1)^k.
  CHECK(y[0] == doctest::Approx(0.5 * std::pow(1.0 / 1.1, 10)).epsilon(1e-6));
}

TEST_CASE("nonlinear step solves the implicit equation") {
  ImplicitEuler<Vec> st;
  const Lorenz lorenz{};
  JacobianSystem sys{lorenz, [&](const Vec& s, DenseMatrix& j, double t) { lorenz.jacobian(s, j, t); }};
  const Vec x0{10.0, 10.0, 10.0};
  Vec x = x0;
  st.do_step(sys, x, 0.0, 0.01);
  CHECK(st.last_iterations() > 1);
  Vec f(3);
  lorenz(x, f, 0.01);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(x[i] - x0[i] - 0.01 * f[i]) < 1e-10);
  }
}

TEST_CASE("implicit Euler errors") {
  ImplicitEuler<Vec> st;
  Vec x{1.0};
  CHECK_THROWS_AS(st.do_step(decay(1.0), x, 0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(st.do_step(decay(1.0), x, 0.0, -0.1), ParameterError);

  // I - dt J = 1 - 0.5 * 2 = 0.
  const auto singular = JacobianSystem{[](const Vec& s, Vec& d, double) { d[0] = 2 * s[0]; },
                                       [](const Vec&, DenseMatrix& j, double) { j(0, 0) = 2; }};
  CHECK_THROWS_AS(st.do_step(singular, x, 0.0, 0.5), SingularMatrixError);

  NewtonParams one;
  one.max_iter = 1;
  ImplicitEuler<Vec> capped(one);
  const auto quadratic =
      JacobianSystem{[](const Vec& s, Vec& d, double) { d[0] = -s[0] * s[0]; },
                     [](const Vec& s, DenseMatrix& j, double) { j(0, 0) = -2 * s[0]; }};
  try {
    capped.do_step(quadratic, x, 0.0, 0.5);
    FAIL("expected nonconvergence");
  } catch (const NewtonNonconvergence& e) {
    CHECK(e.iterations() == 1);
  }

  NewtonParams bad;
  bad.tol = 0;
  CHECK_THROWS_AS(ImplicitEuler<Vec>{bad}, ParameterError);
}

TEST_CASE("implicit Euler converges with order one") {
  const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> errs;
  for (double dt : dts) {
    ImplicitEuler<Vec> st;
    Vec x{1.0};
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < n; ++k) st.do_step(decay(1.0), x, k * dt, dt);
    errs.push_back(std::abs(x[0] - static_cast<double>(oracle::exp_series(-1.0L))));
  }
  const double slope = oracle::loglog_slope(dts, errs);
  MESSAGE("implicit Euler slope " << slope);
  CHECK(std::abs(slope - 1.0) <= 0.1);
}

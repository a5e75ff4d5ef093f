/**
 * @file butcher_tableau.hpp
 * @brief Coefficient tables for the shipped explicit Runge-Kutta pairs.
 *
 * Coefficients follow Hairer, Norsett & Wanner, "Solving Ordinary
 * Differential Equations I" (Cash-Karp 5(4) and Dormand-Prince 5(4)).
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace odekit {

template <std::size_t Stages>
struct ButcherTableau {
  static constexpr std::size_t stages = Stages;
  std::array<std::array<double, Stages>, Stages> a{};  // strictly lower triangular
  std::array<double, Stages> b{};                      // propagated solution
  std::array<double, Stages> b_embedded{};             // error estimate partner
  std::array<double, Stages> c{};

  /// Largest deviation from c_i = sum_j a_ij and sum b = sum b* = 1.
  constexpr double consistency_defect() const {
    double worst = 0.0;
    auto track = [&worst](double d) {
      const double m = d < 0 ? -d : d;
      if (m > worst) worst = m;
    };
    for (std::size_t i = 0; i < Stages; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < Stages; ++j) {
        if (j >= i && a[i][j] != 0.0) track(1.0);  // not explicit
        row += a[i][j];
      }
      track(row - c[i]);
    }
    double sb = 0.0;
    double sbe = 0.0;
    for (std::size_t j = 0; j < Stages; ++j) {
      sb += b[j];
      sbe += b_embedded[j];
    }
    track(sb - 1.0);
    track(sbe - 1.0);
    return worst;
  }
};

inline constexpr ButcherTableau<6> cash_karp_tableau = [] {
  ButcherTableau<6> t;
  t.c = {0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0};
  t.a[1] = {1.0 / 5.0};
  t.a[2] = {3.0 / 40.0, 9.0 / 40.0};
  t.a[3] = {3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0};
  t.a[4] = {-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0};
  t.a[5] = {1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0, 44275.0 / 110592.0,
            253.0 / 4096.0};
  t.b = {37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0};
  t.b_embedded = {2825.0 / 27648.0, 0.0,           18575.0 / 48384.0,
                  13525.0 / 55296.0, 277.0 / 14336.0, 1.0 / 4.0};
  return t;
}();

inline constexpr ButcherTableau<7> dormand_prince_tableau = [] {
  ButcherTableau<7> t;
  t.c = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
  t.a[1] = {1.0 / 5.0};
  t.a[2] = {3.0 / 40.0, 9.0 / 40.0};
  t.a[3] = {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
  t.a[4] = {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
  t.a[5] = {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
            -5103.0 / 18656.0};
  t.a[6] = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
            11.0 / 84.0};
  t.b = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
         11.0 / 84.0, 0.0};
  t.b_embedded = {5179.0 / 57600.0,    0.0,           7571.0 / 16695.0, 393.0 / 640.0,
                  -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};
  return t;
}();

/// Dormand-Prince continuous extension weights (stage 2 weight is zero).
struct DormandPrinceDenseCoefficients {
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;
};

}  // namespace odekit

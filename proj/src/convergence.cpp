#include "odekit/convergence.hpp"

#include <algorithm>

namespace odekit {

std::size_t OrderEstimate::points_used() const {
  return static_cast<std::size_t>(
      std::ranges::count_if(samples, [](const ErrorSample& s) { return s.used; }));
}

std::vector<double> halving_steps(double dt0, std::size_t levels) {
  std::vector<double> dts;
  dts.reserve(levels);
  double dt = dt0;
  for (std::size_t i = 0; i < levels; ++i, dt /= 2) dts.push_back(dt);
  return dts;
}

void require_geometric(std::span<const double> dts) {
  if (dts.size() < 3) throw ParameterError("order estimation needs at least three dt values");
  for (const double dt : dts) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt values must be positive");
  }
  const double ratio = dts[1] / dts[0];
  if (ratio == 1.0) throw ParameterError("dt values must differ");
  for (std::size_t i = 2; i < dts.size(); ++i) {
    if (std::abs(dts[i] / dts[i - 1] - ratio) > 1e-9 * std::abs(ratio)) {
      throw ParameterError("dt values must form a geometric progression");
    }
  }
}

OrderEstimate fit_order(std::span<const double> dts, std::span<const double> errors,
                        double floor) {
  if (dts.size() != errors.size()) throw DimensionError("fit_order: size mismatch");
  OrderEstimate est;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    ErrorSample s{dts[i], errors[i], errors[i] >= floor && std::isfinite(errors[i])};
    if (!s.used) {
      if (errors[i] < floor) est.underflow = true;
    } else {
      const double lx = std::log(s.dt);
      const double ly = std::log(s.error);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    est.samples.push_back(s);
  }
  if (m >= 2) {
    const double md = static_cast<double>(m);
    est.slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  }
  return est;
}

}  // namespace odekit

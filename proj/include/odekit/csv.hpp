/**
 * @file csv.hpp
 * @brief Locale-independent CSV output for trajectories.
 */
#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "odekit/symplectic_euler.hpp"

namespace odekit {

/// printf("%.17g") equivalent in the C locale; round-trips every double.
std::string format_scalar(double v);

/// "t,x0,...,x{n-1}\n"
void write_csv_header(std::ostream& os, std::size_t dimension);
void write_csv_row(std::ostream& os, double t, std::span<const double> x);

/// Observer writing one row per call. Pair states are flattened to (q, p).
class CsvObserver {
 public:
  explicit CsvObserver(std::ostream& os) : os_(&os) {}

  void operator()(const std::vector<double>& x, double t) const { write_csv_row(*os_, t, x); }
  void operator()(const PairState<std::vector<double>>& s, double t) const;

 private:
  std::ostream* os_;
};

}  // namespace odekit

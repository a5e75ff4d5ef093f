#include "odekit/csv.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace odekit {

std::string format_scalar(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf.data(), res.ptr);
}

void write_csv_header(std::ostream& os, std::size_t dimension) {
  std::string line = "t";
  for (std::size_t i = 0; i < dimension; ++i) line += ",x" + std::to_string(i);
  line += '\n';
  os << line;
}

void write_csv_row(std::ostream& os, double t, std::span<const double> x) {
  std::string line = format_scalar(t);
  for (const double v : x) {
    line += ',';
    line += format_scalar(v);
  }
  line += '\n';
  os << line;
}

void CsvObserver::operator()(const PairState<std::vector<double>>& s, double t) const {
  std::vector<double> flat(s.q);
  flat.insert(flat.end(), s.p.begin(), s.p.end());
  write_csv_row(*os_, t, flat);
}

}  // namespace odekit

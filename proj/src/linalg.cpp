#include "odekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odekit/errors.hpp"

namespace odekit {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : DenseMatrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n_) throw DimensionError("DenseMatrix rows must form a square matrix");
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
    ++i;
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::reset(std::size_t n) {
  n_ = n;
  data_.assign(n * n, 0.0);
}

double DenseMatrix::norm_inf() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
    worst = std::max(worst, row);
  }
  return worst;
}

void multiply(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto n = a.size();
  if (x.size() != n || y.size() != n) throw DimensionError("multiply: shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

void LuDecomposition::factor(const DenseMatrix& a) {
  const auto n = a.size();
  lu_ = a;
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best >= singular_pivot)) {
      throw SingularMatrixError("matrix is numerically singular at column " +
                                std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(col, j), lu_(pivot, j));
      std::swap(perm_[col], perm_[pivot]);
    }
    const double inv = 1.0 / lu_(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = lu_(r, col) * inv;
      lu_(r, col) = m;
      if (m == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) lu_(r, j) -= m * lu_(col, j);
    }
  }
}

void LuDecomposition::solve(std::span<const double> b, std::span<double> x) const {
  const auto n = lu_.size();
  if (b.size() != n || x.size() != n) throw DimensionError("lu solve: shape mismatch");
  auto& y = work_;
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = b[perm_[i]];
  // Forward substitution with unit lower triangle.
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * y[j];
    y[ii] = s / lu_(ii, ii);
  }
  std::copy(y.begin(), y.end(), x.begin());
}

std::vector<double> lu_solve(const DenseMatrix& a, std::span<const double> b) {
  if (b.size() != a.size()) throw DimensionError("lu_solve: shape mismatch");
  std::vector<double> x(b.size());
  LuDecomposition(a).solve(b, x);
  return x;
}

}  // namespace odekit

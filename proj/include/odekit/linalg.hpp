/**
 * @file linalg.hpp
 * @brief Small dense matrices and an LU solver with partial pivoting.
 */
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace odekit {

/// Square matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Resize to n x n and zero every entry.
  void reset(std::size_t n);

  /// Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// y = A x
void multiply(const DenseMatrix& a, std::span<const double> x, std::span<double> y);

/**
 * LU factorization with partial (row) pivoting, reusable across solves.
 * factor() throws SingularMatrixError when a pivot magnitude drops below
 * 1e-300. Not safe for concurrent solves on one instance.
 */
class LuDecomposition {
 public:
  static constexpr double singular_pivot = 1e-300;

  LuDecomposition() = default;
  explicit LuDecomposition(const DenseMatrix& a) { factor(a); }

  void factor(const DenseMatrix& a);
  /// Solve A x = b for the factored A. b and x may overlap exactly.
  void solve(std::span<const double> b, std::span<double> x) const;

  std::size_t size() const noexcept { return lu_.size(); }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  mutable std::vector<double> work_;
};

/// Solve A x = b.
std::vector<double> lu_solve(const DenseMatrix& a, std::span<const double> b);

}  // namespace odekit

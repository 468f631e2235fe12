#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "lwb/exact/rational.hpp"

namespace lwb::exact {

/// Sorted (index, nonzero value) pairs.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

SparseVector to_sparse(const Vector& v);
Vector to_dense(const SparseVector& v, std::size_t n);

/// Row-major sparse matrix over the rationals. Zero entries are never stored.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  /// Sets entry (r, c); setting zero erases it.
  void set(std::size_t r, std::size_t c, const Rational& v);
  /// Adds v to entry (r, c).
  void add(std::size_t r, std::size_t c, const Rational& v);
  Rational at(std::size_t r, std::size_t c) const;

  const std::map<std::size_t, Rational>& row(std::size_t r) const { return data_.at(r); }
  std::size_t nonzeros() const;

  /// Appends a row; returns its index.
  std::size_t append_row(const SparseVector& row);

  Vector apply(const Vector& x) const;
  SparseMatrix transpose() const;
  SparseMatrix operator*(const SparseMatrix& rhs) const;
  SparseMatrix operator-(const SparseMatrix& rhs) const;
  SparseMatrix operator+(const SparseMatrix& rhs) const;
  SparseMatrix scaled(const Rational& s) const;
  bool is_zero() const;
  bool operator==(const SparseMatrix& rhs) const;

  std::vector<Vector> to_dense() const;

private:
  void check(std::size_t r, std::size_t c) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, Rational>> data_;
};

}  // namespace lwb::exact

#include "lwb/exact/sparse_matrix.hpp"

#include <string>

#include "lwb/error.hpp"

namespace lwb::exact {

SparseVector to_sparse(const Vector& v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace_back(i, v[i]);
  return out;
}

Vector to_dense(const SparseVector& v, std::size_t n) {
  Vector out = zero_vector(n);
  for (const auto& [i, x] : v) {
    if (i >= n) throw Error("dimension_mismatch", "to_dense index out of range");
    out[i] = x;
  }
  return out;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, Rational(1));
  return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<Vector>& rows, std::size_t cols) {
  SparseMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error("dimension_mismatch", "from_dense row length");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

void SparseMatrix::check(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_)
    throw Error("index_out_of_range",
                "(" + std::to_string(r) + "," + std::to_string(c) + ") in " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rational& v) {
  check(r, c);
  if (v == 0)
    data_[r].erase(c);
  else
    data_[r][c] = v;
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v) {
  check(r, c);
  if (v == 0) return;
  auto it = data_[r].find(c);
  if (it == data_[r].end()) {
    data_[r].emplace(c, v);
    return;
  }
  it->second += v;
  if (it->second == 0) data_[r].erase(it);
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const {
  check(r, c);
  auto it = data_[r].find(c);
  return it == data_[r].end() ? Rational(0) : it->second;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

std::size_t SparseMatrix::append_row(const SparseVector& row) {
  data_.emplace_back();
  ++rows_;
  for (const auto& [c, v] : row) add(rows_ - 1, c, v);
  return rows_ - 1;
}

Vector SparseMatrix::apply(const Vector& x) const {
  if (x.size() != cols_) throw Error("dimension_mismatch", "apply");
  Vector out = zero_vector(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r])
      if (x[c] != 0) out[r] += v * x[c];
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) t.data_[c].emplace(r, v);
  return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error("dimension_mismatch", "matrix product");
  SparseMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [k, a] : data_[r])
      for (const auto& [c, b] : rhs.data_[k]) out.add(r, c, a * b);
  return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("dimension_mismatch", "matrix sum");
  SparseMatrix out = *this;
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : rhs.data_[r]) out.add(r, c, v);
  return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& rhs) const {
  return *this + rhs.scaled(Rational(-1));
}

SparseMatrix SparseMatrix::scaled(const Rational& s) const {
  SparseMatrix out(rows_, cols_);
  if (s == 0) return out;
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) out.data_[r].emplace(c, v * s);
  return out;
}

bool SparseMatrix::is_zero() const { return nonzeros() == 0; }

bool SparseMatrix::operator==(const SparseMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

std::vector<Vector> SparseMatrix::to_dense() const {
  std::vector<Vector> out(rows_, zero_vector(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) out[r][c] = v;
  return out;
}

}  // namespace lwb::exact

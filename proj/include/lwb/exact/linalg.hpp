#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lwb/exact/rational.hpp"
#include "lwb/exact/sparse_matrix.hpp"

namespace lwb::exact {

/// Incremental reduced row echelon form over Z.
///
/// Rows are kept as primitive integer vectors (content 1, positive pivot).
/// A new row is reduced against every stored pivot, then the survivor becomes
/// a pivot and its pivot column is cleared from the stored rows, so the stored
/// set is always fully reduced. Combinations are fraction-free:
/// r <- (p/g) r - (a/g) s with g = gcd(p, a).
///
/// The pivot column of a new row is the one, among its nonzero entries, that
/// occurs in the fewest stored rows (least back-elimination fill); ties go to
/// the smallest column index. Only columns below `pivot_limit` are eligible.
class RowEchelon {
public:
  using IntRow = std::vector<std::pair<std::size_t, Integer>>;

  explicit RowEchelon(std::size_t cols);
  RowEchelon(std::size_t cols, std::size_t pivot_limit);

  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Returns true if the row increased the rank.
  bool insert(const SparseVector& row);
  bool insert(const Vector& row) { return insert(to_sparse(row)); }
  /// Inserts the row if its remainder has an eligible pivot column; otherwise
  /// returns that remainder (empty when the row is already in the span).
  std::optional<IntRow> insert_or_residual(const SparseVector& row);

  /// Remainder of `row` after reduction by the stored pivots (primitive integer
  /// vector up to a positive scalar; empty iff the row is in the span).
  IntRow reduce(const SparseVector& row) const;
  bool in_span(const SparseVector& row) const { return reduce(row).empty(); }

  /// Rows whose pivot column is >= pivot_limit cannot exist; a reduced row
  /// that is nonzero only in columns >= pivot_limit is reported by insert()
  /// as "not inserted" and recorded here.
  bool saw_limit_only_row() const noexcept { return limit_only_; }

  /// Basis of the null space of the stored rows restricted to eligible
  /// columns; one vector per non-pivot column below pivot_limit.
  std::vector<Vector> kernel_basis() const;

  /// Stored rows, each scaled so its pivot entry equals 1, in pivot-column order.
  std::vector<Vector> basis() const;

  /// Pivot column of each stored row, ascending.
  std::vector<std::size_t> pivot_columns() const;

  /// Value of the variables in pivot columns after setting free variables to 0
  /// and reading column `rhs_col` as the right-hand side. Used by solve().
  Vector particular_solution(std::size_t rhs_col, std::size_t nvars) const;

private:
  IntRow reduce_int(IntRow row) const;
  void insert_reduced(IntRow r, std::size_t pivot);
  std::size_t choose_pivot(const IntRow& r) const;
  static IntRow from_sparse(const SparseVector& row);
  static void make_primitive(IntRow& row);
  static IntRow combine(const IntRow& r, const IntRow& s, std::size_t col);
  static const Integer* lookup(const IntRow& row, std::size_t col);

  std::size_t cols_;
  std::size_t pivot_limit_;
  bool limit_only_ = false;
  std::vector<IntRow> rows_;
  std::vector<std::size_t> pivot_col_;
  std::vector<long> pivot_of_col_;     // -1 if column is not a pivot
  std::vector<std::size_t> col_count_; // stored rows touching column
};

std::size_t rank(const SparseMatrix& m);

/// Linearly independent vectors spanning {v : m v = 0}; each result is
/// checked by multiplication before it is returned.
std::vector<Vector> kernel_basis(const SparseMatrix& m);

/// Some x with m x = b, or nullopt if the system is inconsistent.
/// Throws lwb::Error("dimension_mismatch") if b.size() != m.rows().
std::optional<Vector> solve(const SparseMatrix& m, const Vector& b);

/// Linear subspace of Q^n stored as a reduced echelon generator list.
class Subspace {
public:
  explicit Subspace(std::size_t ambient);
  static Subspace span(std::size_t ambient, const std::vector<Vector>& gens);

  std::size_t ambient() const noexcept { return echelon_.cols(); }
  std::size_t dim() const noexcept { return echelon_.rank(); }

  /// Adds a generator; returns true if the dimension grew.
  bool add(const Vector& v);
  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  std::vector<Vector> basis() const { return echelon_.basis(); }

private:
  RowEchelon echelon_;
};

/// dim(big) - dim(small). Throws lwb::Error("not_a_subspace") if small is not
/// contained in big.
std::size_t quotient_dimension(const Subspace& big, const Subspace& small);

}  // namespace lwb::exact

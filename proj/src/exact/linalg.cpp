#include "lwb/exact/linalg.hpp"

#include <algorithm>
#include <string>

#include "lwb/error.hpp"

namespace lwb::exact {

RowEchelon::RowEchelon(std::size_t cols) : RowEchelon(cols, cols) {}

RowEchelon::RowEchelon(std::size_t cols, std::size_t pivot_limit)
    : cols_(cols), pivot_limit_(std::min(cols, pivot_limit)), pivot_of_col_(cols, -1), col_count_(cols, 0) {}

RowEchelon::IntRow RowEchelon::from_sparse(const SparseVector& row) {
  Integer lcm_den(1);
  for (const auto& [c, v] : row) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v.get_den_mpz_t());
  IntRow out;
  out.reserve(row.size());
  for (const auto& [c, v] : row) {
    if (v == 0) continue;
    Integer x = v.get_num() * (lcm_den / v.get_den());
    out.emplace_back(c, std::move(x));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  make_primitive(out);
  return out;
}

void RowEchelon::make_primitive(IntRow& row) {
  if (row.empty()) return;
  Integer g(0);
  for (const auto& [c, v] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

const Integer* RowEchelon::lookup(const IntRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

// Eliminates column `col` from r using s (whose entry at col is its pivot).
RowEchelon::IntRow RowEchelon::combine(const IntRow& r, const IntRow& s, std::size_t col) {
  const Integer& a = *lookup(r, col);
  const Integer& p = *lookup(s, col);
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
  const Integer fr = p / g;
  const Integer fs = a / g;
  IntRow out;
  out.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
      out.emplace_back(r[i].first, fr * r[i].second);
      ++i;
    } else if (i == r.size() || s[j].first < r[i].first) {
      out.emplace_back(s[j].first, -fs * s[j].second);
      ++j;
    } else {
      Integer v = fr * r[i].second - fs * s[j].second;
      if (v != 0) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  return out;
}

// Stored rows are fully reduced, so subtracting one never reintroduces another
// pivot column. The remainder is therefore L*row - sum_c (L a_c / p_c) s_c with
// a_c the original entries at pivot columns and L = lcm of the pivots p_c,
// accumulated densely in one pass.
RowEchelon::IntRow RowEchelon::reduce_int(IntRow row) const {
  std::vector<std::size_t> hits;
  for (const auto& [c, v] : row)
    if (pivot_of_col_[c] >= 0) hits.push_back(c);
  if (hits.empty()) return row;

  Integer l(1);
  for (std::size_t c : hits) {
    const IntRow& s = rows_[static_cast<std::size_t>(pivot_of_col_[c])];
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), lookup(s, c)->get_mpz_t());
  }

  thread_local std::vector<Integer> acc;
  thread_local std::vector<char> touched;
  thread_local std::vector<std::size_t> cols_used;
  if (acc.size() < cols_) {
    acc.resize(cols_);
    touched.resize(cols_, 0);
  }
  cols_used.clear();
  auto touch = [&](std::size_t c) {
    if (!touched[c]) {
      touched[c] = 1;
      acc[c] = 0;
      cols_used.push_back(c);
    }
  };
  for (const auto& [c, v] : row) {
    touch(c);
    acc[c] = l * v;
  }
  Integer f;
  for (std::size_t c : hits) {
    const IntRow& s = rows_[static_cast<std::size_t>(pivot_of_col_[c])];
    const Integer& a = *lookup(row, c);
    mpz_divexact(f.get_mpz_t(), l.get_mpz_t(), lookup(s, c)->get_mpz_t());
    f *= a;
    for (const auto& [j, x] : s) {
      touch(j);
      mpz_submul(acc[j].get_mpz_t(), f.get_mpz_t(), x.get_mpz_t());
    }
  }
  std::sort(cols_used.begin(), cols_used.end());
  IntRow out;
  for (std::size_t c : cols_used) {
    touched[c] = 0;
    if (acc[c] != 0) out.emplace_back(c, acc[c]);
  }
  make_primitive(out);
  return out;
}

RowEchelon::IntRow RowEchelon::reduce(const SparseVector& row) const {
  for (const auto& [c, v] : row)
    if (c >= cols_) throw Error("dimension_mismatch", "row index beyond column count");
  return reduce_int(from_sparse(row));
}

std::size_t RowEchelon::choose_pivot(const IntRow& r) const {
  std::size_t best = cols_;
  std::size_t best_count = 0;
  for (const auto& [c, v] : r) {
    if (c >= pivot_limit_) break;
    if (best == cols_ || col_count_[c] < best_count) {
      best = c;
      best_count = col_count_[c];
    }
  }
  return best;
}

void RowEchelon::insert_reduced(IntRow r, std::size_t best) {
  if (*lookup(r, best) < 0)
    for (auto& [c, v] : r) v = -v;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (!lookup(rows_[k], best)) continue;
    for (const auto& [c, v] : rows_[k]) --col_count_[c];
    rows_[k] = combine(rows_[k], r, best);
    for (const auto& [c, v] : rows_[k]) ++col_count_[c];
  }
  for (const auto& [c, v] : r) ++col_count_[c];
  pivot_of_col_[best] = static_cast<long>(rows_.size());
  pivot_col_.push_back(best);
  rows_.push_back(std::move(r));
}

bool RowEchelon::insert(const SparseVector& row) {
  IntRow r = reduce(row);
  if (r.empty()) return false;
  const std::size_t best = choose_pivot(r);
  if (best == cols_) {
    limit_only_ = true;
    return false;
  }
  insert_reduced(std::move(r), best);
  return true;
}

std::optional<RowEchelon::IntRow> RowEchelon::insert_or_residual(const SparseVector& row) {
  IntRow r = reduce(row);
  if (r.empty()) return r;
  const std::size_t best = choose_pivot(r);
  if (best == cols_) return r;
  insert_reduced(std::move(r), best);
  return std::nullopt;
}

std::vector<std::size_t> RowEchelon::pivot_columns() const {
  std::vector<std::size_t> p = pivot_col_;
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<Vector> RowEchelon::basis() const {
  std::vector<Vector> out;
  for (std::size_t c : pivot_columns()) {
    const IntRow& row = rows_[static_cast<std::size_t>(pivot_of_col_[c])];
    const Integer& p = *lookup(row, c);
    Vector v = zero_vector(cols_);
    for (const auto& [j, x] : row) v[j] = make_rational(x, p);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> RowEchelon::kernel_basis() const {
  std::vector<Vector> out;
  for (std::size_t f = 0; f < pivot_limit_; ++f) {
    if (pivot_of_col_[f] >= 0) continue;
    Vector v = zero_vector(pivot_limit_);
    v[f] = 1;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Integer* a = lookup(rows_[k], f);
      if (!a) continue;
      const std::size_t c = pivot_col_[k];
      v[c] = -make_rational(*a, *lookup(rows_[k], c));
    }
    out.push_back(std::move(v));
  }
  return out;
}

Vector RowEchelon::particular_solution(std::size_t rhs_col, std::size_t nvars) const {
  Vector x = zero_vector(nvars);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Integer* r = lookup(rows_[k], rhs_col);
    if (!r) continue;
    const std::size_t c = pivot_col_[k];
    if (c < nvars) x[c] = make_rational(*r, *lookup(rows_[k], c));
  }
  return x;
}

namespace {

SparseVector row_of(const SparseMatrix& m, std::size_t r) {
  SparseVector out;
  for (const auto& [c, v] : m.row(r)) out.emplace_back(c, v);
  return out;
}

}  // namespace

std::size_t rank(const SparseMatrix& m) {
  RowEchelon e(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert(row_of(m, r));
  return e.rank();
}

std::vector<Vector> kernel_basis(const SparseMatrix& m) {
  RowEchelon e(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert(row_of(m, r));
  auto basis = e.kernel_basis();
  for (const auto& v : basis)
    if (!is_zero(m.apply(v))) throw Error("internal_error", "kernel vector failed verification");
  if (e.rank() + basis.size() != m.cols()) throw Error("internal_error", "rank-nullity mismatch");
  return basis;
}

std::optional<Vector> solve(const SparseMatrix& m, const Vector& b) {
  if (b.size() != m.rows())
    throw Error("dimension_mismatch",
                "rhs length " + std::to_string(b.size()) + " vs rows " + std::to_string(m.rows()));
  const std::size_t n = m.cols();
  RowEchelon e(n + 1, n);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseVector row = row_of(m, r);
    if (b[r] != 0) row.emplace_back(n, b[r]);
    e.insert(row);
    if (e.saw_limit_only_row()) return std::nullopt;
  }
  Vector x = e.particular_solution(n, n);
  if (m.apply(x) != b) throw Error("internal_error", "solve result failed verification");
  return x;
}

Subspace::Subspace(std::size_t ambient) : echelon_(ambient) {}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vector>& gens) {
  Subspace s(ambient);
  for (const auto& g : gens) s.add(g);
  return s;
}

bool Subspace::add(const Vector& v) {
  if (v.size() != ambient()) throw Error("dimension_mismatch", "subspace generator length");
  return echelon_.insert(to_sparse(v));
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient()) throw Error("dimension_mismatch", "subspace membership length");
  return echelon_.in_span(to_sparse(v));
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient() != ambient()) return false;
  for (const auto& v : other.basis())
    if (!contains(v)) return false;
  return true;
}

std::size_t quotient_dimension(const Subspace& big, const Subspace& small) {
  if (!big.contains(small)) throw Error("not_a_subspace", "small subspace is not contained in big");
  return big.dim() - small.dim();
}

}  // namespace lwb::exact

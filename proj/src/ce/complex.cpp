#include "lwb/ce/complex.hpp"

#include <algorithm>
#include <sstream>

#include "lwb/error.hpp"

namespace lwb::ce {

namespace {

void axpy(Vector& y, const Rational& a, const Vector& x) {
  if (a == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

std::string tuple_key(const Tuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s;
}

Tuple parse_key(const std::string& key) {
  Tuple t;
  if (key.empty()) return t;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      t.push_back(std::stoul(part));
    } catch (const std::exception&) {
      throw Error("parse_error", "bad tuple key '" + key + "'");
    }
  }
  return t;
}

// Index of an increasing tuple within increasing_tuples(n, p).
std::map<Tuple, std::size_t> tuple_index(const std::vector<Tuple>& ts) {
  std::map<Tuple, std::size_t> idx;
  for (std::size_t i = 0; i < ts.size(); ++i) idx.emplace(ts[i], i);
  return idx;
}

Tuple without(const Tuple& t, std::size_t i) {
  Tuple out;
  out.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    if (k != i) out.push_back(t[k]);
  return out;
}

Tuple without(const Tuple& t, std::size_t i, std::size_t j) {
  Tuple out;
  out.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    if (k != i && k != j) out.push_back(t[k]);
  return out;
}

}  // namespace

std::vector<Tuple> increasing_tuples(std::size_t n, std::size_t p) {
  std::vector<Tuple> out;
  if (p > n) return out;
  Tuple t(p);
  for (std::size_t i = 0; i < p; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    std::size_t k = p;
    while (k > 0 && t[k - 1] == n - p + k - 1) --k;
    if (k == 0) break;
    ++t[k - 1];
    for (std::size_t j = k; j < p; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

int canonicalize(Tuple& t) {
  int sign = 1;
  // insertion sort counting transpositions; tuples are short
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
      if (t[j - 1] == t[j]) return 0;
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  return sign;
}

Cochain::Cochain(std::size_t degree, std::size_t algebra_dim, std::size_t module_dim)
    : degree_(degree), algebra_dim_(algebra_dim), module_dim_(module_dim) {}

Vector Cochain::value(Tuple t) const {
  if (t.size() != degree_) throw Error("dimension_mismatch", "cochain argument count");
  for (auto i : t)
    if (i >= algebra_dim_) throw Error("index_out_of_range", "cochain argument index");
  const int s = canonicalize(t);
  if (s == 0) return exact::zero_vector(module_dim_);
  auto it = values_.find(t);
  if (it == values_.end()) return exact::zero_vector(module_dim_);
  if (s > 0) return it->second;
  Vector v = it->second;
  for (auto& x : v) x = -x;
  return v;
}

Vector Cochain::evaluate(const std::vector<Vector>& args) const {
  if (args.size() != degree_) throw Error("dimension_mismatch", "cochain argument count");
  Vector out = exact::zero_vector(module_dim_);
  std::vector<std::size_t> order(degree_);
  for (const auto& [t, v] : values_) {
    // sum over permutations sigma: sgn(sigma) prod_k args[k][t[sigma k]]
    for (std::size_t i = 0; i < degree_; ++i) order[i] = i;
    do {
      Rational c(1);
      for (std::size_t k = 0; k < degree_ && c != 0; ++k) c *= args[k].at(t[order[k]]);
      if (c == 0) continue;
      Tuple tmp(order.begin(), order.end());
      axpy(out, canonicalize(tmp) > 0 ? c : Rational(-c), v);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return out;
}

void Cochain::set(Tuple t, Vector v) {
  if (t.size() != degree_) throw Error("dimension_mismatch", "cochain argument count");
  if (v.size() != module_dim_) throw Error("dimension_mismatch", "cochain value length");
  for (auto i : t)
    if (i >= algebra_dim_) throw Error("index_out_of_range", "cochain argument index");
  const int s = canonicalize(t);
  if (s == 0) {
    if (!exact::is_zero(v)) throw Error("not_alternating", "nonzero value on repeated index");
    return;
  }
  if (s < 0)
    for (auto& x : v) x = -x;
  if (exact::is_zero(v))
    values_.erase(t);
  else
    values_[t] = std::move(v);
}

Vector Cochain::coordinates() const {
  const auto ts = increasing_tuples(algebra_dim_, degree_);
  Vector out;
  out.reserve(ts.size() * module_dim_);
  for (const auto& t : ts) {
    auto it = values_.find(t);
    for (std::size_t k = 0; k < module_dim_; ++k) out.push_back(it == values_.end() ? Rational(0) : it->second[k]);
  }
  return out;
}

Cochain Cochain::from_coordinates(std::size_t degree, std::size_t algebra_dim, std::size_t module_dim,
                                  const Vector& coords) {
  const auto ts = increasing_tuples(algebra_dim, degree);
  if (coords.size() != ts.size() * module_dim) throw Error("dimension_mismatch", "cochain coordinate length");
  Cochain c(degree, algebra_dim, module_dim);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Vector v(coords.begin() + static_cast<long>(i * module_dim), coords.begin() + static_cast<long>((i + 1) * module_dim));
    c.set(ts[i], std::move(v));
  }
  return c;
}

void Cochain::check_compatible(const Cochain& o) const {
  if (degree_ != o.degree_ || algebra_dim_ != o.algebra_dim_ || module_dim_ != o.module_dim_)
    throw Error("dimension_mismatch", "incompatible cochains");
}

Cochain Cochain::operator+(const Cochain& o) const {
  check_compatible(o);
  Cochain out = *this;
  for (const auto& [t, v] : o.values_) {
    Vector cur = out.value(t);
    axpy(cur, Rational(1), v);
    out.set(t, std::move(cur));
  }
  return out;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + o.scaled(Rational(-1)); }

Cochain Cochain::scaled(const Rational& s) const {
  Cochain out(degree_, algebra_dim_, module_dim_);
  if (s == 0) return out;
  for (const auto& [t, v] : values_) {
    Vector w = v;
    for (auto& x : w) x *= s;
    out.values_.emplace(t, std::move(w));
  }
  return out;
}

bool Cochain::is_zero() const { return values_.empty(); }

bool Cochain::operator==(const Cochain& o) const {
  return degree_ == o.degree_ && algebra_dim_ == o.algebra_dim_ && module_dim_ == o.module_dim_ &&
         values_ == o.values_;
}

Cochain lie_differential(const LieAlgebra& g, const LieModule& v, const Cochain& f) {
  if (f.algebra_dim() != g.dim() || f.module_dim() != v.dim())
    throw Error("dimension_mismatch", "cochain does not match algebra/module");
  const std::size_t p = f.degree();
  Cochain out(p + 1, g.dim(), v.dim());
  for (const auto& t : increasing_tuples(g.dim(), p + 1)) {
    Vector acc = exact::zero_vector(v.dim());
    for (std::size_t j = 0; j <= p; ++j) {
      const Vector val = f.value(without(t, j));
      if (exact::is_zero(val)) continue;
      axpy(acc, (j % 2 == 0) ? Rational(1) : Rational(-1), v.act(t[j], val));
    }
    for (std::size_t i = 0; i <= p; ++i)
      for (std::size_t j = i + 1; j <= p; ++j) {
        const Vector& br = g.bracket(t[i], t[j]);
        const Tuple rest = without(t, i, j);
        const Rational sign = ((i + j) % 2 == 0) ? Rational(1) : Rational(-1);
        for (std::size_t k = 0; k < g.dim(); ++k) {
          if (br[k] == 0) continue;
          Tuple args;
          args.reserve(p);
          args.push_back(k);
          args.insert(args.end(), rest.begin(), rest.end());
          axpy(acc, sign * br[k], f.value(args));
        }
      }
    out.set(t, std::move(acc));
  }
  return out;
}

exact::SparseMatrix differential_matrix(const LieAlgebra& g, const LieModule& v, std::size_t p) {
  const auto src = increasing_tuples(g.dim(), p);
  const auto dst = increasing_tuples(g.dim(), p + 1);
  const std::size_t m = v.dim();
  exact::SparseMatrix d(dst.size() * m, src.size() * m);
  const auto src_idx = tuple_index(src);

  // Column of a (possibly unsorted) p-tuple; returns sign 0 if degenerate.
  auto column = [&](Tuple t, std::size_t& col) {
    const int s = canonicalize(t);
    if (s != 0) col = src_idx.at(t);
    return s;
  };

  for (std::size_t r = 0; r < dst.size(); ++r) {
    const Tuple& t = dst[r];
    for (std::size_t j = 0; j <= p; ++j) {
      std::size_t col = 0;
      const int s = column(without(t, j), col);
      if (s == 0) continue;
      const Rational sign = ((j % 2 == 0) ? 1 : -1) * s;
      const auto& a = v.action(t[j]);
      for (std::size_t row = 0; row < m; ++row)
        for (const auto& [c, x] : a.row(row)) d.add(r * m + row, col * m + c, sign * x);
    }
    for (std::size_t i = 0; i <= p; ++i)
      for (std::size_t j = i + 1; j <= p; ++j) {
        const Vector& br = g.bracket(t[i], t[j]);
        const Tuple rest = without(t, i, j);
        for (std::size_t k = 0; k < g.dim(); ++k) {
          if (br[k] == 0) continue;
          Tuple args;
          args.push_back(k);
          args.insert(args.end(), rest.begin(), rest.end());
          std::size_t col = 0;
          const int s = column(args, col);
          if (s == 0) continue;
          const Rational c = br[k] * (((i + j) % 2 == 0) ? 1 : -1) * s;
          for (std::size_t row = 0; row < m; ++row) d.add(r * m + row, col * m + row, c);
        }
      }
  }
  return d;
}

CohomologyResult cohomology(const LieAlgebra& g, const LieModule& v, std::size_t p) {
  const std::size_t n = increasing_tuples(g.dim(), p).size() * v.dim();
  const auto z = exact::kernel_basis(differential_matrix(g, v, p));

  exact::Subspace zsp = exact::Subspace::span(n, z);
  exact::Subspace boundaries(n);
  if (p > 0) {
    const auto dprev = differential_matrix(g, v, p - 1);
    // image = span of the columns of dprev
    const auto cols = dprev.transpose().to_dense();
    for (const auto& c : cols) boundaries.add(c);
  }
  if (!zsp.contains(boundaries)) throw Error("internal_error", "coboundaries not contained in cocycles");

  CohomologyResult res;
  res.degree = p;
  res.dim_cocycles = zsp.dim();
  res.dim_coboundaries = boundaries.dim();
  res.dim_cohomology = res.dim_cocycles - res.dim_coboundaries;
  res.scalar_field = g.scalar_field();
  exact::Subspace acc = boundaries;
  for (const auto& zv : z) {
    if (res.representatives.size() == res.dim_cohomology) break;
    if (acc.add(zv)) res.representatives.push_back(Cochain::from_coordinates(p, g.dim(), v.dim(), zv));
  }
  return res;
}

Vector Pairing::apply(const Vector& u, const Vector& v) const {
  if (u.size() != dim_u || v.size() != dim_v) throw Error("dimension_mismatch", "pairing arguments");
  Vector out = exact::zero_vector(dim_w);
  for (std::size_t i = 0; i < dim_u; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < dim_v; ++j) {
      if (v[j] == 0) continue;
      axpy(out, u[i] * v[j], table[i * dim_v + j]);
    }
  }
  return out;
}

Pairing scalar_pairing(std::size_t dim) {
  Pairing m;
  m.dim_u = 1;
  m.dim_v = dim;
  m.dim_w = dim;
  for (std::size_t j = 0; j < dim; ++j) {
    Vector e = exact::zero_vector(dim);
    e[j] = 1;
    m.table.push_back(std::move(e));
  }
  return m;
}

void validate_pairing(const LieAlgebra& g, const LieModule& u, const LieModule& v, const LieModule& w,
                      const Pairing& m) {
  if (m.dim_u != u.dim() || m.dim_v != v.dim() || m.dim_w != w.dim() || m.table.size() != m.dim_u * m.dim_v)
    throw Error("dimension_mismatch", "pairing does not match modules");
  for (std::size_t x = 0; x < g.dim(); ++x)
    for (std::size_t i = 0; i < u.dim(); ++i)
      for (std::size_t j = 0; j < v.dim(); ++j) {
        Vector ei = exact::zero_vector(u.dim());
        ei[i] = 1;
        Vector ej = exact::zero_vector(v.dim());
        ej[j] = 1;
        Vector lhs = w.act(x, m.table[i * m.dim_v + j]);
        Vector r1 = m.apply(u.act(x, ei), ej);
        Vector r2 = m.apply(ei, v.act(x, ej));
        for (std::size_t k = 0; k < lhs.size(); ++k)
          if (lhs[k] != r1[k] + r2[k])
            throw Error("non_equivariant_pairing",
                        "(" + std::to_string(x) + "," + std::to_string(i) + "," + std::to_string(j) + ")");
      }
}

Cochain wedge_unchecked(const Cochain& alpha, const Cochain& beta, const Pairing& m) {
  if (alpha.algebra_dim() != beta.algebra_dim()) throw Error("dimension_mismatch", "wedge over different algebras");
  if (alpha.module_dim() != m.dim_u || beta.module_dim() != m.dim_v)
    throw Error("dimension_mismatch", "pairing does not match cochain modules");
  const std::size_t p = alpha.degree(), q = beta.degree(), n = alpha.algebra_dim();
  Cochain out(p + q, n, m.dim_w);
  const auto shuffles = increasing_tuples(p + q, p);
  for (const auto& t : increasing_tuples(n, p + q)) {
    Vector acc = exact::zero_vector(m.dim_w);
    for (const auto& s : shuffles) {
      Tuple a, b;
      std::size_t inv = 0;
      std::size_t si = 0;
      for (std::size_t k = 0; k < p + q; ++k) {
        if (si < p && s[si] == k) {
          a.push_back(t[k]);
          inv += k - si;
          ++si;
        } else {
          b.push_back(t[k]);
        }
      }
      const Vector va = alpha.value(a);
      if (exact::is_zero(va)) continue;
      const Vector vb = beta.value(b);
      if (exact::is_zero(vb)) continue;
      axpy(acc, inv % 2 == 0 ? Rational(1) : Rational(-1), m.apply(va, vb));
    }
    out.set(t, std::move(acc));
  }
  return out;
}

Cochain wedge(const LieAlgebra& g, const LieModule& u, const LieModule& v, const LieModule& w,
              const Cochain& alpha, const Cochain& beta, const Pairing& m) {
  validate_pairing(g, u, v, w, m);
  return wedge_unchecked(alpha, beta, m);
}

Cochain insertion(const Vector& x, const Cochain& w) {
  if (w.degree() == 0) throw Error("degree_zero_insertion", "cannot insert into a 0-cochain");
  if (x.size() != w.algebra_dim()) throw Error("dimension_mismatch", "insertion vector length");
  const std::size_t p = w.degree();
  Cochain out(p - 1, w.algebra_dim(), w.module_dim());
  for (const auto& t : increasing_tuples(w.algebra_dim(), p - 1)) {
    Vector acc = exact::zero_vector(w.module_dim());
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == 0) continue;
      Tuple args;
      args.push_back(k);
      args.insert(args.end(), t.begin(), t.end());
      axpy(acc, x[k], w.value(args));
    }
    out.set(t, std::move(acc));
  }
  return out;
}

nlohmann::json to_json(const Cochain& c) {
  nlohmann::json j;
  j["degree"] = c.degree();
  nlohmann::json vals = nlohmann::json::object();
  for (const auto& [t, v] : c.values()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : v) arr.push_back(exact::to_string(x));
    vals[tuple_key(t)] = arr;
  }
  j["values"] = vals;
  return j;
}

Cochain cochain_from_json(const nlohmann::json& j, std::size_t algebra_dim, std::size_t module_dim) {
  Cochain c(j.at("degree").get<std::size_t>(), algebra_dim, module_dim);
  if (j.contains("values"))
    for (const auto& [key, arr] : j.at("values").items()) {
      Vector v;
      for (const auto& x : arr) v.push_back(exact::parse_rational(x.get<std::string>()));
      c.set(parse_key(key), std::move(v));
    }
  return c;
}

}  // namespace lwb::ce

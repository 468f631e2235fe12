#include "lwb/lie/lie_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "lwb/error.hpp"

namespace lwb::lie {

namespace {

std::string tuple_str(std::initializer_list<std::size_t> idx) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (auto i : idx) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << ')';
  return os.str();
}

void axpy(Vector& y, const Rational& a, const Vector& x) {
  if (a == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw Error("parse_error", "expected 'i,j' key, got '" + key + "'");
  return {std::stoul(key.substr(0, comma)), std::stoul(key.substr(comma + 1))};
}

}  // namespace

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  Vector out = exact::zero_vector(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (y[j] == 0) continue;
      axpy(out, x[i] * y[j], bracket(i, j));
    }
  }
  return out;
}

SparseMatrix LieAlgebra::ad(std::size_t i) const {
  SparseMatrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const Vector& c = bracket(i, j);
    for (std::size_t k = 0; k < dim(); ++k) m.set(k, j, c[k]);
  }
  return m;
}

LieAlgebra make_algebra(std::vector<std::string> labels, const BracketTable& bracket) {
  const std::size_t n = labels.size();
  LieAlgebra g;
  g.labels_ = std::move(labels);
  g.table_.assign(n * n, exact::zero_vector(n));
  std::vector<bool> given(n * n, false);

  for (const auto& [ij, vec] : bracket) {
    const auto [i, j] = ij;
    if (i >= n || j >= n) throw Error("dimension_mismatch", "bracket index " + tuple_str({i, j}));
    Vector v = exact::to_dense(vec, n);
    if (i == j) {
      if (!exact::is_zero(v)) throw Error("antisymmetry_violation", tuple_str({i, j}));
      continue;
    }
    g.table_[i * n + j] = v;
    given[i * n + j] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector& a = g.table_[i * n + j];
      Vector& b = g.table_[j * n + i];
      if (given[i * n + j] && given[j * n + i]) {
        for (std::size_t k = 0; k < n; ++k)
          if (a[k] != -b[k]) throw Error("antisymmetry_violation", tuple_str({i, j}));
      } else if (given[j * n + i]) {
        for (std::size_t k = 0; k < n; ++k) a[k] = -b[k];
      } else {
        for (std::size_t k = 0; k < n; ++k) b[k] = -a[k];
      }
    }
  }

  auto basis = [n](std::size_t i) {
    Vector e = exact::zero_vector(n);
    e[i] = 1;
    return e;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vector s = g.bracket(g.bracket(i, j), basis(k));
        const Vector t = g.bracket(g.bracket(j, k), basis(i));
        const Vector u = g.bracket(g.bracket(k, i), basis(j));
        for (std::size_t m = 0; m < n; ++m) s[m] += t[m] + u[m];
        if (!exact::is_zero(s)) throw Error("jacobi_violation", tuple_str({i, j, k}));
      }
  return g;
}

SparseMatrix LieModule::action(const Vector& x) const {
  SparseMatrix m(dim_, dim_);
  for (std::size_t i = 0; i < action_.size(); ++i)
    if (x.at(i) != 0) m = m + action_[i].scaled(x[i]);
  return m;
}

LieModule make_module(const LieAlgebra& g, std::vector<SparseMatrix> action) {
  const std::size_t d = action.empty() ? 0 : action.front().rows();
  return make_module(g, std::move(action), d);
}

LieModule make_module(const LieAlgebra& g, std::vector<SparseMatrix> action, std::size_t d) {
  if (action.size() != g.dim())
    throw Error("dimension_mismatch", "need " + std::to_string(g.dim()) + " action matrices");
  for (const auto& m : action)
    if (m.rows() != d || m.cols() != d) throw Error("dimension_mismatch", "action matrices must be square and equal size");
  LieModule mod;
  mod.dim_ = d;
  mod.action_ = std::move(action);
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      const SparseMatrix comm = mod.action_[i] * mod.action_[j] - mod.action_[j] * mod.action_[i];
      if (!(mod.action(g.bracket(i, j)) == comm)) throw Error("representation_violation", tuple_str({i, j}));
    }
  return mod;
}

LieModule trivial_module(const LieAlgebra& g, std::size_t dim) {
  return make_module(g, std::vector<SparseMatrix>(g.dim(), SparseMatrix(dim, dim)), dim);
}

LieModule adjoint_module(const LieAlgebra& g) {
  std::vector<SparseMatrix> act;
  for (std::size_t i = 0; i < g.dim(); ++i) act.push_back(g.ad(i));
  return make_module(g, std::move(act));
}

Subspace invariants_subspace(const LieAlgebra& g, const LieModule& v) {
  SparseMatrix stacked(0, v.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const auto& m = v.action(i);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      SparseVector row(m.row(r).begin(), m.row(r).end());
      stacked.append_row(row);
    }
  }
  return Subspace::span(v.dim(), exact::kernel_basis(stacked));
}

LieAlgebra abelian(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  return make_algebra(std::move(labels), {});
}

LieAlgebra sl2_circle() {
  BracketTable t;
  t[{0, 1}] = {{2, Rational(-2)}};
  t[{0, 2}] = {{1, Rational(2)}};
  t[{1, 2}] = {{0, Rational(2)}};
  LieAlgebra g = make_algebra({"U", "H", "P"}, t);
  g.set_rescaling("U", "1/pi");
  g.set_rescaling("H", "cos(2*pi*t)/pi");
  g.set_rescaling("P", "sin(2*pi*t)/pi");
  return g;
}

LieAlgebra sl2_witt() {
  BracketTable t;
  t[{0, 1}] = {{0, Rational(1)}};  // [l_-1, l_0] = l_-1
  t[{0, 2}] = {{1, Rational(2)}};  // [l_-1, l_1] = 2 l_0
  t[{1, 2}] = {{2, Rational(1)}};  // [l_0, l_1] = l_1
  LieAlgebra g = make_algebra({"l_-1", "l_0", "l_1"}, t);
  g.set_rescaling("l_a", "exp(2*pi*i*a*t), derivative taken as d/(2*pi*i dt)");
  return g;
}

LieAlgebra heisenberg() {
  BracketTable t;
  t[{0, 1}] = {{2, Rational(1)}};
  return make_algebra({"x", "y", "z"}, t);
}

nlohmann::json to_json(const LieAlgebra& g) {
  nlohmann::json j;
  j["labels"] = g.labels();
  j["scalar_field"] = g.scalar_field();
  nlohmann::json br = nlohmann::json::object();
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t k = i + 1; k < g.dim(); ++k) {
      const Vector& c = g.bracket(i, k);
      if (exact::is_zero(c)) continue;
      nlohmann::json entry = nlohmann::json::object();
      for (std::size_t m = 0; m < g.dim(); ++m)
        if (c[m] != 0) entry[std::to_string(m)] = exact::to_string(c[m]);
      br[std::to_string(i) + "," + std::to_string(k)] = entry;
    }
  j["bracket"] = br;
  if (!g.rescaling().empty()) j["rescaling"] = g.rescaling();
  return j;
}

LieAlgebra algebra_from_json(const nlohmann::json& j) {
  auto labels = j.at("labels").get<std::vector<std::string>>();
  BracketTable t;
  if (j.contains("bracket"))
    for (const auto& [key, entry] : j.at("bracket").items()) {
      SparseVector v;
      for (const auto& [k, val] : entry.items()) {
        Rational r = exact::parse_rational(val.get<std::string>());
        if (r != 0) v.emplace_back(std::stoul(k), r);
      }
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      t[parse_pair(key)] = v;
    }
  LieAlgebra g = make_algebra(std::move(labels), t);
  if (j.contains("rescaling"))
    for (const auto& [k, v] : j.at("rescaling").items()) g.set_rescaling(k, v.get<std::string>());
  return g;
}

nlohmann::json to_json(const LieModule& m) {
  nlohmann::json j;
  j["dim"] = m.dim();
  nlohmann::json act = nlohmann::json::object();
  for (std::size_t i = 0; i < m.algebra_dim(); ++i) {
    nlohmann::json entries = nlohmann::json::object();
    const auto& a = m.action(i);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (const auto& [c, v] : a.row(r)) entries[std::to_string(r) + "," + std::to_string(c)] = exact::to_string(v);
    act[std::to_string(i)] = entries;
  }
  j["action"] = act;
  return j;
}

LieModule module_from_json(const LieAlgebra& g, const nlohmann::json& j) {
  const std::size_t d = j.at("dim").get<std::size_t>();
  std::vector<SparseMatrix> act(g.dim(), SparseMatrix(d, d));
  if (j.contains("action"))
    for (const auto& [key, entries] : j.at("action").items()) {
      const std::size_t i = std::stoul(key);
      if (i >= g.dim()) throw Error("dimension_mismatch", "action index " + key);
      for (const auto& [rc, val] : entries.items()) {
        const auto [r, c] = parse_pair(rc);
        if (r >= d || c >= d) throw Error("dimension_mismatch", "action entry " + rc);
        act[i].set(r, c, exact::parse_rational(val.get<std::string>()));
      }
    }
  return make_module(g, std::move(act), d);
}

}  // namespace lwb::lie

#include "lwb/witt/witt.hpp"

#include <algorithm>
#include <sstream>

#include "lwb/error.hpp"

namespace lwb::witt {

namespace {

int sort_with_sign(Index& t) {
  int sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
      if (t[j - 1] == t[j]) return 0;
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  return sign;
}

long sum(const Index& t) {
  long s = 0;
  for (long a : t) s += a;
  return s;
}

std::string key_of(const Index& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s;
}

Index parse_index(const std::string& key) {
  Index t;
  if (key.empty()) return t;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      t.push_back(std::stol(part));
    } catch (const std::exception&) {
      throw Error("parse_error", "bad index key '" + key + "'");
    }
  }
  return t;
}

using Terms = std::map<Index, Rational>;

// (d w)(l_{t_0}, .., l_{t_p}) as a combination of coefficients of w (canonical
// tuples), for w of internal degree d with values in F_lambda; t increasing.
Terms differential_terms(const Rational& lambda, long d, const Index& t) {
  Terms out;
  const long s = sum(t);
  const std::size_t n = t.size();
  auto add = [&](Index idx, const Rational& c) {
    if (c == 0) return;
    const int sg = sort_with_sign(idx);
    if (sg == 0) return;
    Rational& slot = out[idx];
    slot += sg > 0 ? c : Rational(-c);
    if (slot == 0) out.erase(idx);
  };
  for (std::size_t j = 0; j < n; ++j) {
    Index rest;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) rest.push_back(t[k]);
    // l_{t_j} . f_m with m = s - t_j + d
    Rational c = Rational(s - t[j] + d) + lambda * t[j];
    if (j % 2) c = -c;
    add(std::move(rest), c);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Index idx{t[i] + t[j]};
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && k != j) idx.push_back(t[k]);
      Rational c(t[j] - t[i]);
      if ((i + j) % 2) c = -c;
      add(std::move(idx), c);
    }
  return out;
}

std::vector<Index> tuples_from(const std::vector<long>& set, std::size_t p) {
  std::vector<Index> out;
  const std::size_t n = set.size();
  if (p > n) return out;
  std::vector<std::size_t> pos(p);
  for (std::size_t i = 0; i < p; ++i) pos[i] = i;
  while (true) {
    Index t;
    for (auto k : pos) t.push_back(set[k]);
    out.push_back(std::move(t));
    std::size_t k = p;
    while (k > 0 && pos[k - 1] == n - p + k - 1) --k;
    if (k == 0) break;
    ++pos[k - 1];
    for (std::size_t j = k; j < p; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

std::vector<long> range(long w) {
  std::vector<long> r;
  for (long a = -w; a <= w; ++a) r.push_back(a);
  return r;
}

std::map<Index, std::size_t> index_map(const std::vector<Index>& ts) {
  std::map<Index, std::size_t> m;
  for (std::size_t i = 0; i < ts.size(); ++i) m.emplace(ts[i], i);
  return m;
}

// Coboundaries of arbitrary (p-1)-cochains (indices from `sources`) restricted to
// the `inner` p-tuples.
exact::Subspace coboundaries(const Rational& lambda, long d, const std::vector<Index>& inner,
                             const std::vector<Index>& sources) {
  exact::Subspace b(inner.size());
  if (inner.empty() || inner.front().empty()) return b;  // p = 0
  const auto src = index_map(sources);
  SparseMatrix m(inner.size(), sources.size());
  for (std::size_t r = 0; r < inner.size(); ++r)
    for (const auto& [idx, c] : differential_terms(lambda, d, inner[r])) {
      auto it = src.find(idx);
      if (it == src.end()) throw Error("internal_error", "coboundary source window too small");
      m.add(r, it->second, c);
    }
  const SparseMatrix mt = m.transpose();
  for (std::size_t c = 0; c < mt.rows(); ++c) {
    exact::SparseVector col(mt.row(c).begin(), mt.row(c).end());
    if (!col.empty()) b.add(exact::to_dense(col, inner.size()));
  }
  return b;
}

struct Solved {
  exact::Subspace z;
  exact::Subspace b;
  std::vector<Vector> representatives;
};

// Shared solver. Equations are kept when every referenced coefficient is an
// unknown. Z is the projection of the solution space onto `inner` (a subset of
// `unknowns`): outer unknowns are eliminated first, and the residual rows that
// only involve inner unknowns cut out the projection.
Solved solve_graded(const Rational& lambda, long d, const std::vector<Index>& unknowns,
                    const std::vector<Index>& equations, const std::vector<Index>& inner,
                    const std::vector<Index>& sources) {
  const auto inner_idx = index_map(inner);
  std::map<Index, std::size_t> col;  // outer unknowns first, then inner
  std::size_t n_outer = 0;
  for (const auto& u : unknowns)
    if (!inner_idx.count(u)) col.emplace(u, n_outer++);
  for (const auto& [t, i] : inner_idx) col.emplace(t, n_outer + i);

  exact::RowEchelon outer(n_outer + inner.size(), n_outer);
  exact::RowEchelon constraints(inner.size());
  for (const auto& t : equations) {
    exact::SparseVector row;
    bool keep = true;
    for (const auto& [idx, c] : differential_terms(lambda, d, t)) {
      auto it = col.find(idx);
      if (it == col.end()) {
        keep = false;
        break;
      }
      row.emplace_back(it->second, c);
    }
    if (!keep || row.empty()) continue;
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto residual = outer.insert_or_residual(row);
    if (!residual || residual->empty()) continue;
    exact::SparseVector shifted;
    for (const auto& [c, v] : *residual) shifted.emplace_back(c - n_outer, Rational(v));
    constraints.insert(shifted);
  }

  exact::Subspace z = exact::Subspace::span(inner.size(), constraints.kernel_basis());
  exact::Subspace b = coboundaries(lambda, d, inner, sources);
  if (!z.contains(b)) throw Error("internal_error", "coboundaries not contained in cocycles");

  Solved out{z, b, {}};
  exact::Subspace acc = b;
  const std::size_t dim_h = z.dim() - b.dim();
  for (const auto& v : z.basis()) {
    if (out.representatives.size() == dim_h) break;
    if (acc.add(v)) out.representatives.push_back(v);
  }
  return out;
}

GradedCochain from_vector(const std::vector<Index>& tuples, const Vector& v, long d, long window) {
  const std::size_t p = tuples.empty() ? 0 : tuples.front().size();
  GradedCochain w(p, d, window);
  for (std::size_t i = 0; i < tuples.size(); ++i) w.set(tuples[i], v[i]);
  return w;
}

Vector to_vector(const GradedCochain& w, const std::vector<Index>& tuples) {
  Vector v;
  v.reserve(tuples.size());
  for (const auto& t : tuples) v.push_back(w.coeff(t));
  return v;
}

}  // namespace

std::size_t WittSpec::spot_check(std::mt19937_64& rng, std::size_t count, long range) const {
  std::uniform_int_distribution<long> pick(-range, range);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const long a = pick(rng), b = pick(rng), m = pick(rng);
    // [l_a, l_b] f_m = (b - a) (m + lambda (a + b)) f_{m+a+b}
    const Rational lhs = bracket_coeff(a, b) * action_coeff(a + b, m);
    const Rational rhs = action_coeff(a, m + b) * action_coeff(b, m) - action_coeff(b, m + a) * action_coeff(a, m);
    if (lhs != rhs) ++failures;
    // antisymmetry and Jacobi of the bracket closed form
    const long c = pick(rng);
    const Rational jac = bracket_coeff(a, b) * bracket_coeff(a + b, c) + bracket_coeff(b, c) * bracket_coeff(b + c, a) +
                         bracket_coeff(c, a) * bracket_coeff(c + a, b);
    if (jac != 0 || bracket_coeff(a, b) != -bracket_coeff(b, a)) ++failures;
  }
  return failures;
}

GradedCochain::GradedCochain(std::size_t degree, long internal_degree, long window)
    : degree_(degree), internal_degree_(internal_degree), window_(window) {
  if (window < 0) throw Error("window_too_small", "negative window");
}

bool GradedCochain::in_window(const Index& a) const {
  return std::all_of(a.begin(), a.end(), [this](long x) { return x >= -window_ && x <= window_; });
}

Rational GradedCochain::coeff(Index a) const {
  if (a.size() != degree_) throw Error("dimension_mismatch", "graded cochain argument count");
  if (!in_window(a)) throw Error("index_out_of_range", "index outside window: " + key_of(a));
  const int s = sort_with_sign(a);
  if (s == 0) return Rational(0);
  auto it = coeffs_.find(a);
  if (it == coeffs_.end()) return Rational(0);
  return s > 0 ? it->second : Rational(-it->second);
}

void GradedCochain::set(Index a, const Rational& c) {
  if (a.size() != degree_) throw Error("dimension_mismatch", "graded cochain argument count");
  if (!in_window(a)) throw Error("index_out_of_range", "index outside window: " + key_of(a));
  const int s = sort_with_sign(a);
  if (s == 0) {
    if (c != 0) throw Error("not_alternating", "nonzero value on repeated index");
    return;
  }
  if (c == 0)
    coeffs_.erase(a);
  else
    coeffs_[a] = s > 0 ? c : Rational(-c);
}

GradedCochain GradedCochain::restricted(long window) const {
  GradedCochain out(degree_, internal_degree_, std::min(window, window_));
  for (const auto& [a, c] : coeffs_)
    if (out.in_window(a)) out.coeffs_.emplace(a, c);
  return out;
}

GradedCochain GradedCochain::operator+(const GradedCochain& o) const {
  if (degree_ != o.degree_ || internal_degree_ != o.internal_degree_)
    throw Error("dimension_mismatch", "incompatible graded cochains");
  GradedCochain out = restricted(std::min(window_, o.window_));
  for (const auto& [a, c] : o.coeffs_)
    if (out.in_window(a)) out.set(a, out.coeff(a) + c);
  return out;
}

GradedCochain GradedCochain::operator-(const GradedCochain& o) const { return *this + o.scaled(Rational(-1)); }

GradedCochain GradedCochain::scaled(const Rational& s) const {
  GradedCochain out(degree_, internal_degree_, window_);
  if (s == 0) return out;
  for (const auto& [a, c] : coeffs_) out.coeffs_.emplace(a, c * s);
  return out;
}

bool GradedCochain::operator==(const GradedCochain& o) const {
  return degree_ == o.degree_ && internal_degree_ == o.internal_degree_ && window_ == o.window_ &&
         coeffs_ == o.coeffs_;
}

std::vector<Index> window_tuples(long window, std::size_t p) { return tuples_from(range(window), p); }

GradedCochain standard_cocycle(StandardName name, const Rational& lambda, long window, unsigned n) {
  auto unsupported = [&](const std::string& what) {
    return Error("unsupported_cocycle", what + " at lambda = " + exact::to_string(lambda));
  };
  auto lam_is = [&](long v) { return lambda == v; };
  switch (name) {
    case StandardName::alpha: {
      const bool ok = (n == 0 && lam_is(0)) || n == 1 || (n == 2 && lam_is(1)) || (n == 3 && lam_is(2));
      if (!ok) throw unsupported("alpha_" + std::to_string(n));
      GradedCochain w(1, 0, window);
      for (long a = -window; a <= window; ++a) w.set({a}, exact::power(Rational(a), n));
      return w;
    }
    case StandardName::omega_bar: {
      if (!(lam_is(0) || lam_is(1) || lam_is(2))) throw unsupported("omega_bar");
      const unsigned k = static_cast<unsigned>(lambda.get_num().get_si()) + 1;
      GradedCochain w(2, 0, window);
      for (const auto& t : window_tuples(window, 2))
        w.set(t, exact::power(Rational(t[1]), k) - exact::power(Rational(t[0]), k));
      return w;
    }
    case StandardName::omega: {
      GradedCochain w(2, 0, window);
      if (lam_is(0)) {
        for (const auto& t : window_tuples(window, 2))
          if (t[0] + t[1] == 0) w.set(t, Rational(t[0] * t[1] * (t[1] - t[0])));
        return w;
      }
      if (!(lam_is(1) || lam_is(2))) throw unsupported("omega");
      const unsigned k = static_cast<unsigned>(lambda.get_num().get_si()) + 1;
      for (const auto& t : window_tuples(window, 2)) {
        const Rational a(t[0]), b(t[1]);
        w.set(t, a * exact::power(b, k) - b * exact::power(a, k));
      }
      return w;
    }
  }
  throw unsupported("unknown name");
}

GradedCochain standard_cocycle(const std::string& name, const Rational& lambda, long window) {
  if (name.rfind("alpha_", 0) == 0) {
    try {
      return standard_cocycle(StandardName::alpha, lambda, window, static_cast<unsigned>(std::stoul(name.substr(6))));
    } catch (const std::logic_error&) {
      throw Error("unsupported_cocycle", name);
    }
  }
  if (name.rfind("omega_bar", 0) == 0) return standard_cocycle(StandardName::omega_bar, lambda, window);
  if (name.rfind("omega", 0) == 0) return standard_cocycle(StandardName::omega, lambda, window);
  throw Error("unsupported_cocycle", name);
}

GradedCochain graded_differential(const Rational& lambda, const GradedCochain& w) {
  GradedCochain out(w.degree() + 1, w.internal_degree(), w.window());
  for (const auto& t : window_tuples(w.window(), w.degree() + 1)) {
    const Terms terms = differential_terms(lambda, w.internal_degree(), t);
    bool inside = true;
    Rational acc(0);
    for (const auto& [idx, c] : terms) {
      if (!w.in_window(idx)) {
        inside = false;
        break;
      }
      acc += c * w.coeff(idx);
    }
    if (inside) out.set(t, acc);
  }
  return out;
}

GradedCochain graded_wedge(const GradedCochain& a, const GradedCochain& b) {
  const long window = std::min(a.window(), b.window());
  const std::size_t p = a.degree(), q = b.degree();
  GradedCochain out(p + q, a.internal_degree() + b.internal_degree(), window);
  std::vector<long> pos;
  for (std::size_t k = 0; k < p + q; ++k) pos.push_back(static_cast<long>(k));
  const auto shuffles = tuples_from(pos, p);
  for (const auto& t : window_tuples(window, p + q)) {
    Rational acc(0);
    for (const auto& s : shuffles) {
      Index x, y;
      std::size_t si = 0, inv = 0;
      for (std::size_t k = 0; k < p + q; ++k) {
        if (si < p && s[si] == static_cast<long>(k)) {
          x.push_back(t[k]);
          inv += k - si;
          ++si;
        } else {
          y.push_back(t[k]);
        }
      }
      const Rational v = a.coeff(x) * b.coeff(y);
      acc += inv % 2 ? Rational(-v) : v;
    }
    out.set(t, acc);
  }
  return out;
}

GradedCochain graded_insertion(long c, const GradedCochain& w) {
  if (w.degree() == 0) throw Error("degree_zero_insertion", "cannot insert into a 0-cochain");
  if (c < -w.window() || c > w.window()) throw Error("index_out_of_range", "insertion index outside window");
  GradedCochain out(w.degree() - 1, w.internal_degree() + c, w.window());
  for (const auto& t : window_tuples(w.window(), w.degree() - 1)) {
    Index full{c};
    full.insert(full.end(), t.begin(), t.end());
    out.set(t, w.coeff(full));
  }
  return out;
}

namespace {

WindowCohomology window_run(const Rational& lambda, std::size_t p, long outer, long inner, long d) {
  if (static_cast<long>(p) > inner || inner > outer - static_cast<long>(p))
    throw Error("window_too_small", "need p <= M <= N - p, got p=" + std::to_string(p) + " N=" +
                                        std::to_string(outer) + " M=" + std::to_string(inner));
  const auto equations = window_tuples(outer, p + 1);
  std::vector<Index> unknowns = window_tuples(outer, p);
  {
    std::map<Index, bool> seen;
    for (const auto& u : unknowns) seen[u] = true;
    for (const auto& t : equations)
      for (const auto& [idx, c] : differential_terms(lambda, d, t))
        if (seen.emplace(idx, true).second) unknowns.push_back(idx);
  }
  const auto in = window_tuples(inner, p);
  const auto sources = p == 0 ? std::vector<Index>{} : window_tuples(2 * inner, p - 1);
  Solved s = solve_graded(lambda, d, unknowns, equations, in, sources);

  WindowCohomology r;
  r.lambda = lambda;
  r.degree = p;
  r.internal_degree = d;
  r.outer_window = outer;
  r.inner_window = inner;
  r.dim_cocycles = s.z.dim();
  r.dim_coboundaries = s.b.dim();
  r.dim_cohomology = r.dim_cocycles - r.dim_coboundaries;
  for (const auto& v : s.representatives) r.representatives.push_back(from_vector(in, v, d, inner));
  return r;
}

}  // namespace

WindowCohomology homogeneous_cohomology(const Rational& lambda, std::size_t p, long outer, long inner,
                                        long internal_degree) {
  WindowCohomology r = window_run(lambda, p, outer, inner, internal_degree);
  if (inner - 2 >= static_cast<long>(p)) {
    const WindowCohomology prev = window_run(lambda, p, outer - 2, inner - 2, internal_degree);
    r.previous_dim_cohomology = prev.dim_cohomology;
    r.stabilized = prev.dim_cohomology == r.dim_cohomology;
  }
  return r;
}

bool in_span_mod_coboundaries(const Rational& lambda, const GradedCochain& w, const std::vector<GradedCochain>& basis,
                              long inner) {
  const std::size_t p = w.degree();
  const auto in = window_tuples(inner, p);
  const auto sources = p == 0 ? std::vector<Index>{} : window_tuples(2 * inner, p - 1);
  exact::Subspace s = coboundaries(lambda, w.internal_degree(), in, sources);
  for (const auto& b : basis) s.add(to_vector(b.restricted(inner), in));
  return s.contains(to_vector(w.restricted(inner), in));
}

CupIdentityReport cup_identity_check(const Rational& lambda, long window) {
  if (!(lambda == 1 || lambda == 2)) throw Error("unsupported_cocycle", "cup identity needs lambda in {1,2}");
  const unsigned k = static_cast<unsigned>(lambda.get_num().get_si()) + 1;
  const GradedCochain a0 = standard_cocycle(StandardName::alpha, Rational(0), window, 0);
  const GradedCochain a1 = standard_cocycle(StandardName::alpha, Rational(0), window, 1);
  const GradedCochain ak = standard_cocycle(StandardName::alpha, lambda, window, k);
  CupIdentityReport r;
  r.lambda = lambda;
  r.window = window;
  r.pairs_checked = window_tuples(window, 2).size();
  r.omega_bar_identity = graded_wedge(a0, ak) == standard_cocycle(StandardName::omega_bar, lambda, window);
  r.omega_identity = graded_wedge(a1, ak) == standard_cocycle(StandardName::omega, lambda, window);
  return r;
}

SliceCohomology sl2_slice_cohomology(const Rational& lambda, std::size_t p) {
  if (p > 3) throw Error("dimension_mismatch", "sl2 slice has cochains only up to degree 3");
  const std::vector<long> set{-1, 0, 1};
  const auto unknowns = tuples_from(set, p);
  const auto equations = tuples_from(set, p + 1);
  const auto sources = p == 0 ? std::vector<Index>{} : tuples_from(set, p - 1);
  Solved s = solve_graded(lambda, 0, unknowns, equations, unknowns, sources);
  SliceCohomology r;
  r.lambda = lambda;
  r.degree = p;
  r.dim_cocycles = s.z.dim();
  r.dim_coboundaries = s.b.dim();
  r.dim_cohomology = r.dim_cocycles - r.dim_coboundaries;
  for (const auto& v : s.representatives) r.representatives.push_back(from_vector(unknowns, v, 0, 1));
  return r;
}

FiniteSlice restrict_to_finite_slice(const Rational& lambda, long window) {
  if (window < 1) throw Error("window_too_small", "finite slice needs M >= 1");
  const WittSpec spec{lambda};
  FiniteSlice s;
  s.lambda = lambda;
  s.window = window;
  const std::size_t n = static_cast<std::size_t>(2 * window + 1);
  for (long a = -1; a <= 1; ++a) {
    SparseMatrix in(n, n), full(n + 2, n);
    for (long m = -window; m <= window; ++m) {
      const Rational c = spec.action_coeff(a, m);
      const long target = m + a;
      const auto col = static_cast<std::size_t>(m + window);
      full.set(static_cast<std::size_t>(target + window + 1), col, c);
      if (target < -window || target > window) {
        if (c != 0) s.leakage.push_back({a, m, target, c});
      } else {
        in.set(static_cast<std::size_t>(target + window), col, c);
      }
    }
    s.action.push_back(std::move(in));
    s.full_action.push_back(std::move(full));
  }
  return s;
}

lie::LieModule FiniteSlice::to_module(const lie::LieAlgebra& sl2) const {
  if (!leakage.empty()) {
    const Leak& l = leakage.front();
    throw Error("truncation_leak", "l_" + std::to_string(l.generator) + " f_" + std::to_string(l.source) + " -> f_" +
                                       std::to_string(l.target));
  }
  return lie::make_module(sl2, action, static_cast<std::size_t>(2 * window + 1));
}

exact::Subspace FiniteSlice::invariants() const {
  SparseMatrix stacked(0, static_cast<std::size_t>(2 * window + 1));
  for (const auto& m : full_action)
    for (std::size_t r = 0; r < m.rows(); ++r) stacked.append_row(exact::SparseVector(m.row(r).begin(), m.row(r).end()));
  return exact::Subspace::span(stacked.cols(), exact::kernel_basis(stacked));
}

nlohmann::json to_json(const GradedCochain& w) {
  nlohmann::json j;
  j["degree"] = w.degree();
  j["internal_degree"] = w.internal_degree();
  j["window"] = w.window();
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [a, v] : w.coefficients()) c[key_of(a)] = exact::to_string(v);
  j["coefficients"] = c;
  return j;
}

GradedCochain graded_cochain_from_json(const nlohmann::json& j) {
  GradedCochain w(j.at("degree").get<std::size_t>(), j.value("internal_degree", 0L), j.at("window").get<long>());
  if (j.contains("coefficients"))
    for (const auto& [k, v] : j.at("coefficients").items()) w.set(parse_index(k), exact::parse_rational(v.get<std::string>()));
  return w;
}

nlohmann::json to_json(const WindowCohomology& r) {
  nlohmann::json j;
  j["lambda"] = exact::to_string(r.lambda);
  j["p"] = r.degree;
  j["internal_degree"] = r.internal_degree;
  j["window"] = {r.outer_window, r.inner_window};
  j["dimZ"] = r.dim_cocycles;
  j["dimB"] = r.dim_coboundaries;
  j["dimH"] = r.dim_cohomology;
  j["stabilized"] = r.stabilized;
  j["scalar_field"] = r.scalar_field;
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& w : r.representatives) reps.push_back(to_json(w));
  j["representatives"] = reps;
  return j;
}

}  // namespace lwb::witt

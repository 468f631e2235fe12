#include "lwb/flux/period_flux.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "lwb/error.hpp"
#include "lwb/exact/linalg.hpp"
#include "lwb/exact/sparse_matrix.hpp"

namespace lwb::flux {

namespace {

double max_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Golub-Welsch on [0, 1]; cached per order.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t k = 1; k < n; ++k) {
    const double b = double(k) / std::sqrt(4.0 * double(k) * double(k) - 1.0);
    j(Eigen::Index(k), Eigen::Index(k - 1)) = j(Eigen::Index(k - 1), Eigen::Index(k)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussRule r;
  for (std::size_t k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, Eigen::Index(k));
    r.x.push_back(0.5 * (es.eigenvalues()(Eigen::Index(k)) + 1.0));
    r.w.push_back(v0 * v0);  // 2 v0^2 on [-1, 1], halved for [0, 1]
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// Fourth-order central difference with the step shrunk to stay inside the domain.
Point directional(const std::function<Point(double, double)>& f, double t, double s, bool along_t, double room) {
  const double h = std::min(1e-3, room / 2);
  auto at = [&](double d) { return along_t ? f(t + d, s) : f(t, s + d); };
  const Point a = at(2 * h), b = at(h), c = at(-h), d = at(-2 * h);
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (-a[i] + 8 * b[i] - 8 * c[i] + d[i]) / (12 * h);
  return out;
}

std::vector<double> integrate_once(const SurfaceMap& h, const FormField& omega, std::size_t n) {
  const auto& g = gauss_legendre(n);
  std::vector<double> acc;
  auto add = [&](const std::vector<double>& v, double w) {
    if (acc.empty()) acc.assign(v.size(), 0.0);
    if (v.size() != acc.size()) throw Error("dimension_mismatch", "form values change length");
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += w * v[k];
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double t, s, jac;
      double room_t, room_s;
      if (h.domain == Domain::square) {
        t = g.x[a];
        s = g.x[b];
        jac = 1;
        room_t = std::min(t, 1 - t);
        room_s = std::min(s, 1 - s);
      } else {
        const double u = g.x[a], v = g.x[b];
        t = u * (1 - v);
        s = u * v;
        jac = u;
        room_t = std::min(t, 1 - t - s);
        room_s = std::min(s, 1 - t - s);
      }
      const Point p = h.eval(t, s);
      const Point dt = directional(h.eval, t, s, true, room_t);
      const Point ds = directional(h.eval, t, s, false, room_s);
      add(omega(p, dt, ds), g.w[a] * g.w[b] * jac);
    }
  }
  return acc;
}

[[noreturn]] void not_independent() { throw Error("not_independent", "lattice generators are linearly dependent"); }

}  // namespace

FormField constant_form(std::vector<Eigen::MatrixXd> components) {
  return [w = std::move(components)](const Point&, const Point& u, const Point& v) {
    std::vector<double> out;
    out.reserve(w.size());
    const Eigen::Map<const Eigen::VectorXd> uu(u.data(), Eigen::Index(u.size())), vv(v.data(), Eigen::Index(v.size()));
    for (const auto& m : w) out.push_back(uu.dot(m * vv));
    return out;
  };
}

SurfaceIntegral surface_integral(const SurfaceMap& h, const FormField& omega, const QuadratureOptions& opt) {
  if (h.resolution < 8) throw Error("invalid_argument", "surface resolution must be at least 8 per axis");
  std::size_t n = h.resolution;
  auto prev = integrate_once(h, omega, n);
  double change = 0;
  while (2 * n <= opt.max_resolution) {
    auto next = integrate_once(h, omega, 2 * n);
    std::vector<double> diff(next.size());
    for (std::size_t k = 0; k < next.size(); ++k) diff[k] = next[k] - prev[k];
    change = max_norm(diff);
    if (change <= opt.tol * std::max(1.0, max_norm(next))) return {std::move(next), 2 * n, change};
    prev = std::move(next);
    n *= 2;
  }
  throw Error("resolution_insufficient",
              "surface quadrature did not settle by resolution " + std::to_string(n) + " (last change " +
                  std::to_string(change) + ")");
}

SurfaceIntegral surface_integral(const std::vector<SurfaceMap>& atlas, const FormField& omega,
                                 const QuadratureOptions& opt) {
  SurfaceIntegral total;
  for (const auto& patch : atlas) {
    auto part = surface_integral(patch, omega, opt);
    if (total.value.empty()) total.value.assign(part.value.size(), 0.0);
    for (std::size_t k = 0; k < part.value.size(); ++k) total.value[k] += part.value[k];
    total.resolution = std::max(total.resolution, part.resolution);
    total.refinement_change += part.refinement_change;
  }
  return total;
}

// ---------------------------------------------------------------------------

Lattice Lattice::exact(std::vector<exact::Vector> generators) {
  Lattice l;
  l.ambient_ = generators.empty() ? 0 : generators[0].size();
  for (const auto& g : generators)
    if (g.size() != l.ambient_) throw Error("dimension_mismatch", "lattice generators differ in length");
  if (!generators.empty() && exact::rank(exact::SparseMatrix::from_dense(generators, l.ambient_)) != generators.size())
    not_independent();
  for (const auto& g : generators) {
    std::vector<double> d;
    for (const auto& q : g) d.push_back(q.get_d());
    l.gens_.push_back(std::move(d));
  }
  l.exact_gens_ = std::move(generators);
  return l;
}

Lattice Lattice::approximate(std::vector<std::vector<double>> generators) {
  Lattice l;
  l.ambient_ = generators.empty() ? 0 : generators[0].size();
  Eigen::MatrixXd b(Eigen::Index(l.ambient_), Eigen::Index(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != l.ambient_) throw Error("dimension_mismatch", "lattice generators differ in length");
    for (std::size_t i = 0; i < l.ambient_; ++i) b(Eigen::Index(i), Eigen::Index(j)) = generators[j][i];
  }
  if (!generators.empty()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    lu.setThreshold(1e-12);
    if (std::size_t(lu.rank()) != generators.size()) not_independent();
  }
  l.gens_ = std::move(generators);
  return l;
}

Lattice Lattice::integers(std::size_t n) {
  std::vector<exact::Vector> g(n, exact::zero_vector(n));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = 1;
  return exact(std::move(g));
}

Lattice Lattice::zero(std::size_t n) {
  Lattice l;
  l.ambient_ = n;
  l.exact_gens_ = std::vector<exact::Vector>{};
  return l;
}

const std::vector<exact::Vector>& Lattice::exact_generators() const {
  if (!exact_gens_) throw Error("not_exact", "lattice has float generators only");
  return *exact_gens_;
}

std::optional<std::vector<exact::Integer>> Lattice::coordinates(const exact::Vector& v) const {
  const auto& g = exact_generators();
  if (v.size() != ambient_) throw Error("dimension_mismatch", "vector and lattice ambient dimensions differ");
  if (g.empty()) {
    if (!exact::is_zero(v)) return std::nullopt;
    return std::vector<exact::Integer>{};
  }
  std::vector<exact::Vector> rows(ambient_, exact::zero_vector(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < ambient_; ++i) rows[i][j] = g[j][i];
  const auto c = exact::solve(exact::SparseMatrix::from_dense(rows, g.size()), v);
  if (!c) return std::nullopt;
  std::vector<exact::Integer> out;
  for (const auto& q : *c) {
    if (q.get_den() != 1) return std::nullopt;
    out.push_back(q.get_num());
  }
  return out;
}

std::vector<double> Lattice::float_coordinates(const std::vector<double>& v) const {
  if (v.size() != ambient_) throw Error("dimension_mismatch", "vector and lattice ambient dimensions differ");
  if (gens_.empty()) return {};
  Eigen::MatrixXd b(Eigen::Index(ambient_), Eigen::Index(gens_.size()));
  for (std::size_t j = 0; j < gens_.size(); ++j)
    for (std::size_t i = 0; i < ambient_; ++i) b(Eigen::Index(i), Eigen::Index(j)) = gens_[j][i];
  const Eigen::Map<const Eigen::VectorXd> rhs(v.data(), Eigen::Index(v.size()));
  const Eigen::VectorXd c = b.colPivHouseholderQr().solve(rhs);
  return {c.data(), c.data() + c.size()};
}

bool Lattice::contains(const std::vector<double>& v, double tol) const {
  const auto c = float_coordinates(v);
  std::vector<double> back(ambient_, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (std::abs(c[j] - std::round(c[j])) > tol) return false;
    for (std::size_t i = 0; i < ambient_; ++i) back[i] += c[j] * gens_[j][i];
  }
  for (std::size_t i = 0; i < ambient_; ++i)
    if (std::abs(back[i] - v[i]) > tol * std::max(1.0, max_norm(v))) return false;
  return true;
}

CommutatorPairing torus_commutator_pairing(const std::vector<RationalMatrix>& omega, const Lattice& gamma_t,
                                           const Lattice& gamma_z, double tol) {
  const std::size_t n = gamma_t.ambient(), m = omega.size();
  if (gamma_z.ambient() != m) throw Error("dimension_mismatch", "Gamma_Z must live in the value space of omega");
  std::vector<Eigen::MatrixXd> wd;
  for (const auto& w : omega) {
    if (w.size() != n) throw Error("dimension_mismatch", "omega component is not n x n");
    Eigen::MatrixXd d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i].size() != n) throw Error("dimension_mismatch", "omega component is not n x n");
      for (std::size_t j = 0; j < n; ++j) {
        if (w[i][j] != -w[j][i]) throw Error("not_alternating", "omega is not skew-symmetric");
        d(Eigen::Index(i), Eigen::Index(j)) = w[i][j].get_d();
      }
    }
    wd.push_back(std::move(d));
  }
  const auto form = constant_form(wd);
  const auto& g = gamma_t.generators();
  const std::size_t r = g.size();
  CommutatorPairing out;
  out.values.assign(r, std::vector<std::vector<double>>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      SurfaceMap h{Domain::square, [&g, i, j](double t, double s) {
                     Point p(g[i].size());
                     for (std::size_t k = 0; k < p.size(); ++k) p[k] = t * g[i][k] + s * g[j][k];
                     return p;
                   }};
      out.values[i][j] = surface_integral(h, form).value;
    }
  if (gamma_t.is_exact()) {
    const auto& ge = gamma_t.exact_generators();
    std::vector<std::vector<exact::Vector>> ev(r, std::vector<exact::Vector>(r, exact::zero_vector(m)));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          exact::Rational acc = 0;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) acc += ge[i][a] * omega[k][a][b] * ge[j][b];
          ev[i][j][k] = acc;
          out.max_quadrature_error = std::max(out.max_quadrature_error, std::abs(acc.get_d() - out.values[i][j][k]));
        }
    out.exact_values = std::move(ev);
  }
  out.exact_verdict = out.exact_values.has_value() && gamma_z.is_exact();
  out.contained = true;
  for (std::size_t i = 0; i < r && out.contained; ++i)
    for (std::size_t j = i + 1; j < r && out.contained; ++j) {
      const bool in = out.exact_verdict ? gamma_z.contains((*out.exact_values)[i][j])
                                        : gamma_z.contains(out.values[i][j], tol);
      if (!in) {
        out.contained = false;
        out.witness = std::pair{i, j};
      }
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Fornberg's weights for the first derivative at x0 from nodes xs.
std::vector<double> fornberg_first(double x0, const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1, c4 = xs[0] - x0;
  c[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) c[i][k] = c1 * (double(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - double(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

struct Piece {
  std::size_t lo, hi;  // node range, inclusive
};

std::vector<Piece> pieces_of(const LoopInGroup& g) {
  std::vector<Piece> out;
  std::size_t lo = 0;
  for (std::size_t b : g.breaks()) {
    out.push_back({lo, b});
    lo = b;
  }
  out.push_back({lo, g.intervals()});
  return out;
}

bool spectral(const LoopInGroup& g) { return g.breaks().empty() && g.closed(); }

// Per node: phi^{-1} and delta^l; break nodes appear once per adjacent piece.
struct NodeData {
  std::size_t index;
  CircleDiffeo inverse;
  PeriodicFunction delta;
};

std::vector<std::vector<NodeData>> node_data(const LoopInGroup& g) {
  const auto tangents_by_piece = [&] {
    std::vector<std::vector<PeriodicFunction>> out;
    const auto& nodes = g.nodes();
    const std::size_t m = g.intervals(), k = nodes[0].grid();
    if (spectral(g)) {
      const double turns = double(g.winding());
      std::vector<std::vector<double>> d(m + 1, std::vector<double>(k));
      for (std::size_t x = 0; x < k; ++x) {
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = nodes[j].displacement()[x] - turns * double(j) / double(m);
        const auto dr = PeriodicFunction(std::move(row)).derivative(1);
        for (std::size_t j = 0; j < m; ++j) d[j][x] = dr[j] + turns;
        d[m][x] = d[0][x];
      }
      std::vector<PeriodicFunction> t;
      for (auto& v : d) t.emplace_back(std::move(v));
      out.push_back(std::move(t));
      return out;
    }
    const double h = 1.0 / double(m);
    for (const auto& p : pieces_of(g)) {
      std::vector<PeriodicFunction> t;
      for (std::size_t j = p.lo; j <= p.hi; ++j) {
        const std::size_t start = std::clamp<std::size_t>(j < 3 ? 0 : j - 3, p.lo, p.hi - 6);
        std::vector<double> xs;
        for (std::size_t q = start; q < start + 7; ++q) xs.push_back(double(q) - double(j));
        const auto w = fornberg_first(0.0, xs);
        std::vector<double> acc(k, 0.0);
        for (std::size_t q = 0; q < 7; ++q)
          for (std::size_t x = 0; x < k; ++x) acc[x] += w[q] * nodes[start + q].displacement()[x];
        for (double& v : acc) v /= h;
        t.emplace_back(std::move(acc));
      }
      out.push_back(std::move(t));
    }
    return out;
  }();

  std::vector<Piece> ps = spectral(g) ? std::vector<Piece>{{0, g.intervals()}} : pieces_of(g);
  std::vector<std::vector<NodeData>> out;
  std::map<std::size_t, CircleDiffeo> inverses;
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    std::vector<NodeData> nd;
    for (std::size_t j = ps[pi].lo; j <= ps[pi].hi; ++j) {
      auto it = inverses.find(j);
      if (it == inverses.end()) it = inverses.emplace(j, circle::invert(g.nodes()[j])).first;
      nd.push_back({j, it->second, circle::pull_back(it->second, tangents_by_piece[pi][j - ps[pi].lo])});
    }
    out.push_back(std::move(nd));
  }
  return out;
}

// Integral over t of integrand(node data, node); spectral rules for closed
// smooth loops, Boole per piece otherwise. The half-grid value drives the
// ratio test.
PeriodicFunction integrate_loop(const LoopInGroup& g,
                                const std::function<PeriodicFunction(const NodeData&, const CircleDiffeo&)>& integrand,
                                double tol) {
  const auto data = node_data(g);
  const std::size_t m = g.intervals(), k = g.nodes()[0].grid();
  std::vector<double> full(k, 0.0), half(k, 0.0);
  auto accumulate = [&](std::vector<double>& acc, const PeriodicFunction& v, double w) {
    for (std::size_t x = 0; x < k; ++x) acc[x] += w * v[x];
  };
  const double h = 1.0 / double(m);
  if (spectral(g)) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto v = integrand(data[0][j], g.nodes()[j]);
      accumulate(full, v, h);
      if (j % 2 == 0) accumulate(half, v, 2 * h);
    }
  } else {
    static const double boole[5] = {7, 32, 12, 32, 7};
    for (const auto& piece : data) {
      const std::size_t len = piece.size() - 1;
      std::vector<double> wf(len + 1, 0.0), wh(len + 1, 0.0);
      for (std::size_t b = 0; b + 4 <= len; b += 4)
        for (std::size_t q = 0; q < 5; ++q) wf[b + q] += 2 * h / 45 * boole[q];
      for (std::size_t b = 0; b + 8 <= len; b += 8)
        for (std::size_t q = 0; q < 5; ++q) wh[b + 2 * q] += 4 * h / 45 * boole[q];
      for (std::size_t j = 0; j <= len; ++j) {
        const auto v = integrand(piece[j], g.nodes()[piece[j].index]);
        accumulate(full, v, wf[j]);
        if (wh[j] != 0) accumulate(half, v, wh[j]);
      }
    }
  }
  double change = 0, size = 0;
  for (std::size_t x = 0; x < k; ++x) {
    change = std::max(change, std::abs(full[x] - half[x]));
    size = std::max(size, std::abs(full[x]));
  }
  if (change > tol * std::max(1.0, size))
    throw Error("resolution_insufficient",
                "loop quadrature changes by " + std::to_string(change) + " between node sets");
  return PeriodicFunction(std::move(full));
}

}  // namespace

LoopInGroup::LoopInGroup(std::vector<CircleDiffeo> nodes, std::vector<std::size_t> breaks)
    : nodes_(std::move(nodes)), breaks_(std::move(breaks)) {
  if (nodes_.size() < 65 || !is_power_of_two(nodes_.size() - 1))
    throw Error("invalid_grid", "a loop needs 2^k + 1 nodes with 2^k >= 64");
  for (const auto& n : nodes_)
    if (n.grid() != nodes_[0].grid()) throw Error("invalid_grid", "loop nodes use different spatial grids");
  std::size_t prev = 0;
  for (std::size_t b : breaks_) {
    if (b <= prev || b >= intervals() || (b - prev) % 8 != 0)
      throw Error("invalid_grid", "breaks must be increasing and cut pieces of 8k intervals");
    prev = b;
  }
  if ((intervals() - prev) % 8 != 0) throw Error("invalid_grid", "last piece must have 8k intervals");
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
    if ((nodes_[j + 1].displacement() - nodes_[j].displacement()).max_abs() > 0.25)
      throw Error("resolution_insufficient", "adjacent loop nodes are more than a quarter turn apart");
}

LoopInGroup LoopInGroup::from_function(std::size_t intervals, const std::function<CircleDiffeo(double)>& f) {
  std::vector<CircleDiffeo> nodes;
  for (std::size_t j = 0; j <= intervals; ++j) nodes.push_back(f(double(j) / double(intervals)));
  return LoopInGroup(std::move(nodes));
}

LoopInGroup LoopInGroup::rotation(std::size_t grid, std::size_t intervals) {
  return from_function(intervals, [grid](double t) { return CircleDiffeo::rotation(grid, t); });
}

LoopInGroup LoopInGroup::constant(const CircleDiffeo& g, std::size_t intervals) {
  return from_function(intervals, [&g](double) { return g; });
}

bool LoopInGroup::closed(double tol) const {
  const auto d = nodes_.back().displacement() - nodes_.front().displacement();
  const double first = d[0];
  if (std::abs(first - std::round(first)) > tol) return false;
  for (std::size_t x = 0; x < d.grid(); ++x)
    if (std::abs(d[x] - first) > tol) return false;
  return true;
}

long LoopInGroup::winding() const {
  if (!closed()) throw Error("not_closed", "winding number of an open path");
  return std::lround(nodes_.back().displacement()[0] - nodes_.front().displacement()[0]);
}

LoopInGroup LoopInGroup::reversed() const {
  std::vector<CircleDiffeo> n(nodes_.rbegin(), nodes_.rend());
  std::vector<std::size_t> b;
  for (auto it = breaks_.rbegin(); it != breaks_.rend(); ++it) b.push_back(intervals() - *it);
  return LoopInGroup(std::move(n), std::move(b));
}

LoopInGroup concatenate(const LoopInGroup& a, const LoopInGroup& b) {
  if (a.intervals() != b.intervals()) throw Error("invalid_grid", "concatenated loops need equal node counts");
  const std::size_t m = a.intervals();
  const CircleDiffeo g = circle::product(a.nodes().back(), circle::invert(b.nodes().front()));
  std::vector<CircleDiffeo> nodes = a.nodes();
  for (std::size_t j = 1; j <= m; ++j) nodes.push_back(circle::product(g, b.nodes()[j]));
  std::vector<std::size_t> breaks = a.breaks();
  breaks.push_back(m);
  for (std::size_t x : b.breaks()) breaks.push_back(m + x);
  return LoopInGroup(std::move(nodes), std::move(breaks));
}

LieTwoCocycle lie_two_cocycle(const std::string& name) {
  if (circle::lie_cocycle_degree(name) != 2) throw Error("unknown_cocycle", name + " is not a 2-cocycle");
  return {name, circle::lie_cocycle_weight(name), [name](const PeriodicFunction& x, const PeriodicFunction& y) {
            return circle::evaluate_lie_cocycle(name, {x, y});
          }};
}

LieOneCocycle lie_one_cocycle(const std::string& name) {
  if (circle::lie_cocycle_degree(name) != 1) throw Error("unknown_cocycle", name + " is not a 1-cocycle");
  return {name, circle::lie_cocycle_weight(name),
          [name](const PeriodicFunction& x) { return circle::evaluate_lie_cocycle(name, {x}); }};
}

PeriodicFunction adjoint_inverse(const CircleDiffeo& phi, const PeriodicFunction& x) {
  return circle::density_action(-1, circle::invert(phi), x);
}

PeriodicFunction flux_line_integral(const LieTwoCocycle& omega, const LoopInGroup& gamma, const PeriodicFunction& x,
                                    const LineOptions& opt) {
  return integrate_loop(
      gamma,
      [&](const NodeData& d, const CircleDiffeo& phi) {
        const auto y = circle::density_action(-1, d.inverse, x);
        return circle::density_action(omega.lambda, phi, omega.eval(y, d.delta));
      },
      opt.tol);
}

PeriodicFunction flux_value(const LieTwoCocycle& omega, const LoopInGroup& gamma, const PeriodicFunction& x,
                            const LineOptions& opt) {
  return flux_line_integral(omega, gamma, x, opt).scaled(-1);
}

PeriodicFunction translated_flux(const LieTwoCocycle& omega, const CircleDiffeo& g, const LoopInGroup& gamma,
                                 const PeriodicFunction& x, const LineOptions& opt) {
  return circle::density_action(omega.lambda, g, flux_value(omega, gamma, adjoint_inverse(g, x), opt));
}

FluxCocycleReport flux_cocycle_property(const LieTwoCocycle& omega, const LoopInGroup& gamma1,
                                        const LoopInGroup& gamma2, const PeriodicFunction& x,
                                        const LineOptions& opt) {
  FluxCocycleReport r;
  const auto f1 = flux_value(omega, gamma1, x, opt);
  const CircleDiffeo g = circle::product(gamma1.nodes().back(), circle::invert(gamma2.nodes().front()));
  r.concatenated = flux_value(omega, concatenate(gamma1, gamma2), x, opt);
  r.sum = f1 + translated_flux(omega, g, gamma2, x, opt);
  r.composition_error = (r.concatenated - r.sum).max_abs();
  r.inverse_error = (flux_value(omega, gamma1.reversed(), x, opt) + f1).max_abs();
  return r;
}

PeriodicFunction loop_period_1cocycle(const LieOneCocycle& alpha, const LoopInGroup& gamma, const LineOptions& opt) {
  return integrate_loop(
      gamma,
      [&](const NodeData& d, const CircleDiffeo& phi) {
        return circle::density_action(alpha.lambda, phi, alpha.eval(d.delta));
      },
      opt.tol);
}

FluxClass flux_class(const LieTwoCocycle& omega, const LoopInGroup& gamma, const std::vector<std::string>& h1_basis,
                     std::size_t modes, const LineOptions& opt) {
  const std::size_t k = gamma.nodes()[0].grid();
  const double pi = std::numbers::pi;
  std::vector<PeriodicFunction> probes{PeriodicFunction::constant(k, 1.0)};
  for (int f = 1; f <= 4; ++f) {
    probes.push_back(PeriodicFunction::from_function(k, [=](double t) { return std::cos(2 * pi * f * t); }));
    probes.push_back(PeriodicFunction::from_function(k, [=](double t) { return std::sin(2 * pi * f * t); }));
  }
  std::vector<PeriodicFunction> nuisance{PeriodicFunction::constant(k, 1.0)};
  for (std::size_t f = 1; f <= modes; ++f) {
    nuisance.push_back(PeriodicFunction::from_function(k, [=](double t) { return std::cos(2 * pi * double(f) * t); }));
    nuisance.push_back(PeriodicFunction::from_function(k, [=](double t) { return std::sin(2 * pi * double(f) * t); }));
  }
  std::vector<LieOneCocycle> basis;
  for (const auto& b : h1_basis) {
    basis.push_back(lie_one_cocycle(b));
    if (basis.back().lambda != omega.lambda)
      throw Error("dimension_mismatch", b + " takes values in a different density module");
  }
  const std::size_t cols = basis.size() + nuisance.size();
  Eigen::MatrixXd a(Eigen::Index(k * probes.size()), Eigen::Index(cols));
  Eigen::VectorXd rhs(Eigen::Index(k * probes.size()));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto f = flux_value(omega, gamma, probes[p], opt);
    std::vector<PeriodicFunction> col;
    for (const auto& b : basis) col.push_back(b.eval(probes[p]));
    for (const auto& n : nuisance) col.push_back(circle::lie_action(omega.lambda, probes[p], n));
    for (std::size_t x = 0; x < k; ++x) {
      const auto row = Eigen::Index(p * k + x);
      rhs(row) = f[x];
      for (std::size_t c = 0; c < cols; ++c) a(row, Eigen::Index(c)) = col[c][x];
    }
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  FluxClass out;
  out.basis = h1_basis;
  for (std::size_t i = 0; i < basis.size(); ++i) out.coordinates.push_back(c(Eigen::Index(i)));
  const double scale = std::max(rhs.norm(), 1e-300);
  out.relative_residual = rhs.norm() == 0 ? 0 : (a * c - rhs).norm() / scale;
  return out;
}

// ---------------------------------------------------------------------------

GroupChart abelian_chart(std::size_t n, double radius) {
  return {"abelian", n,
          [](const Point& x, const Point& y) {
            Point z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
            return z;
          },
          radius};
}

GroupChart heisenberg_chart(double radius) {
  return {"heisenberg", 3,
          [](const Point& x, const Point& y) {
            return Point{x[0] + y[0], x[1] + y[1], x[2] + y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0])};
          },
          radius};
}

namespace {

void check_region(const GroupChart& c, const Point& p) {
  if (p.size() != c.dim) throw Error("dimension_mismatch", "point has the wrong chart dimension");
  if (max_norm(p) > c.radius) throw Error("chart_region_exceeded", "point leaves the " + c.name + " chart");
}

// Left-invariant extension: Omega_g(u, v) = Omega(L_g^{-1} u, L_g^{-1} v) with
// L_g the differential of left translation at the identity.
FormField left_invariant(const GroupChart& chart, const Eigen::MatrixXd& omega) {
  return [chart, omega](const Point& g, const Point& u, const Point& v) {
    const std::size_t n = chart.dim;
    const double h = 1e-3;
    Eigen::MatrixXd l(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto at = [&](double d) {
        Point e(n, 0.0);
        e[i] = d;
        return chart.mul(g, e);
      };
      const Point a = at(2 * h), b = at(h), c = at(-h), d = at(-2 * h);
      for (std::size_t r = 0; r < n; ++r)
        l(Eigen::Index(r), Eigen::Index(i)) = (-a[r] + 8 * b[r] - 8 * c[r] + d[r]) / (12 * h);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(l);
    const Eigen::VectorXd uu = lu.solve(Eigen::Map<const Eigen::VectorXd>(u.data(), Eigen::Index(n)));
    const Eigen::VectorXd vv = lu.solve(Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(n)));
    return std::vector<double>{uu.dot(omega * vv)};
  };
}

}  // namespace

double simplex_cocycle(const GroupChart& chart, const Eigen::MatrixXd& omega, const Point& x, const Point& y,
                       const QuadratureOptions& opt) {
  check_region(chart, x);
  check_region(chart, y);
  SurfaceMap sigma{Domain::triangle, [&](double t, double s) {
                     Point sy(y.size()), ty(y.size());
                     for (std::size_t i = 0; i < y.size(); ++i) {
                       sy[i] = s * y[i];
                       ty[i] = (1 - t) * y[i];
                     }
                     const Point a = chart.mul(x, sy), b = chart.mul(x, ty);
                     Point p(a.size());
                     for (std::size_t i = 0; i < p.size(); ++i) p[i] = t * a[i] + s * b[i];
                     check_region(chart, p);
                     return p;
                   },
                   8};
  return surface_integral(sigma, left_invariant(chart, omega), opt).value.at(0);
}

double alternated_second_derivative(const std::function<double(const Point&, const Point&)>& f, const Point& x,
                                    const Point& y, double h) {
  auto scaled = [](const Point& p, double s) {
    Point q(p);
    for (double& v : q) v *= s;
    return q;
  };
  auto mixed = [&](const Point& a, const Point& b) {
    return (f(scaled(a, h), scaled(b, h)) - f(scaled(a, h), scaled(b, -h)) - f(scaled(a, -h), scaled(b, h)) +
            f(scaled(a, -h), scaled(b, -h))) /
           (4 * h * h);
  };
  return mixed(x, y) - mixed(y, x);
}

// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::integrable: return "integrable";
    case Verdict::obstructed_period: return "obstructed_period";
    case Verdict::obstructed_flux: return "obstructed_flux";
  }
  return "unknown";
}

IntegrabilityVerdict integrability_decision(const IntegrabilityData& data, const Lattice& gamma_a) {
  IntegrabilityVerdict out;
  if (data.exact_periods && gamma_a.is_exact()) {
    for (std::size_t i = 0; i < data.exact_periods->size(); ++i) {
      const auto& p = (*data.exact_periods)[i];
      if (!gamma_a.contains(p)) {
        std::vector<std::string> text;
        for (const auto& q : p) text.push_back(exact::to_string(q));
        out.verdict = Verdict::obstructed_period;
        out.witness = {{"generator", i}, {"value", text}, {"exact", true}};
        return out;
      }
    }
  } else {
    for (std::size_t i = 0; i < data.periods.size(); ++i) {
      if (!gamma_a.contains(data.periods[i], data.tol)) {
        out.verdict = Verdict::obstructed_period;
        out.witness = {{"generator", i},
                       {"value", data.periods[i]},
                       {"coordinates", gamma_a.float_coordinates(data.periods[i])},
                       {"exact", false}};
        return out;
      }
    }
  }
  Eigen::MatrixXd img;
  if (!data.characteristic_image.empty()) {
    const std::size_t d = data.characteristic_image[0].size();
    img.resize(Eigen::Index(d), Eigen::Index(data.characteristic_image.size()));
    for (std::size_t j = 0; j < data.characteristic_image.size(); ++j)
      for (std::size_t i = 0; i < d; ++i) img(Eigen::Index(i), Eigen::Index(j)) = data.characteristic_image[j].at(i);
  }
  for (std::size_t i = 0; i < data.flux_values.size(); ++i) {
    const auto& f = data.flux_values[i];
    double residual = max_norm(f);
    if (img.size() != 0) {
      if (std::size_t(img.rows()) != f.size()) throw Error("dimension_mismatch", "flux value and image differ in length");
      const Eigen::Map<const Eigen::VectorXd> v(f.data(), Eigen::Index(f.size()));
      const Eigen::VectorXd c = img.colPivHouseholderQr().solve(v);
      residual = (img * c - v).cwiseAbs().maxCoeff();
    }
    if (residual > data.tol) {
      out.verdict = Verdict::obstructed_flux;
      out.witness = {{"index", i}, {"value", f}, {"residual", residual}};
      return out;
    }
  }
  return out;
}

nlohmann::json to_json(const IntegrabilityVerdict& v) {
  nlohmann::json j{{"verdict", to_string(v.verdict)}};
  j["witness"] = v.witness.is_null() ? nlohmann::json(nullptr) : v.witness;
  return j;
}

}  // namespace lwb::flux

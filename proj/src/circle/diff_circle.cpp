#include "lwb/circle/diff_circle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "lwb/error.hpp"
#include "lwb/simd/kernels.hpp"

namespace lwb::circle {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

bool is_power_of_two(std::size_t k) { return k != 0 && (k & (k - 1)) == 0; }

void check_grid(std::size_t k) {
  if (k < 16 || !is_power_of_two(k))
    throw Error("invalid_grid", "grid size must be a power of two >= 16, got " + std::to_string(k));
}

void same_grid(const PeriodicFunction& a, const PeriodicFunction& b) {
  if (a.grid() != b.grid()) throw Error("dimension_mismatch", "functions live on different grids");
}

// FFTW plans are created once per size under a lock and executed through the
// new-array interface on fftw_malloc buffers, which share the planning alignment.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex g_plan_mutex;

const Plans& plans_for(std::size_t k) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(k);
  fftw_complex* out = fftw_alloc_complex(k / 2 + 1);
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(k), in, out, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(k), out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(k, p).first->second;
}

std::vector<std::complex<double>> forward(const std::vector<double>& samples) {
  const std::size_t k = samples.size();
  const Plans& p = plans_for(k);
  double* in = fftw_alloc_real(k);
  fftw_complex* out = fftw_alloc_complex(k / 2 + 1);
  std::copy(samples.begin(), samples.end(), in);
  fftw_execute_dft_r2c(p.r2c, in, out);
  std::vector<std::complex<double>> c(k / 2 + 1);
  for (std::size_t i = 0; i <= k / 2; ++i) c[i] = std::complex<double>(out[i][0], out[i][1]) / double(k);
  fftw_free(in);
  fftw_free(out);
  return c;
}

std::vector<double> backward(const std::vector<std::complex<double>>& c, std::size_t k) {
  const Plans& p = plans_for(k);
  double* outr = fftw_alloc_real(k);
  fftw_complex* in = fftw_alloc_complex(k / 2 + 1);
  for (std::size_t i = 0; i <= k / 2; ++i) {
    in[i][0] = c[i].real();
    in[i][1] = c[i].imag();
  }
  fftw_execute_dft_c2r(p.c2r, in, outr);
  std::vector<double> s(outr, outr + k);
  fftw_free(outr);
  fftw_free(in);
  return s;
}

// Coefficient arrays for the trig-series kernel.
struct Series {
  double a0 = 0;
  std::vector<double> ca, sb;
};

Series series_of(const PeriodicFunction& f) {
  const auto c = f.coefficients();
  const std::size_t h = f.grid() / 2;
  Series s;
  s.a0 = c[0].real();
  s.ca.resize(h);
  s.sb.resize(h);
  for (std::size_t k = 1; k < h; ++k) {
    s.ca[k - 1] = 2 * c[k].real();
    s.sb[k - 1] = 2 * c[k].imag();
  }
  // Nyquist mode read as a cosine so the interpolant stays real.
  s.ca[h - 1] = c[h].real();
  s.sb[h - 1] = 0;
  return s;
}

std::vector<double> eval_series(const Series& s, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  simd::kernels().trig_series(s.a0, s.ca.data(), s.sb.data(), s.ca.size(), x.data(), out.data(), x.size());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PeriodicFunction

PeriodicFunction::PeriodicFunction(std::vector<double> samples) : samples_(std::move(samples)) {
  check_grid(samples_.size());
  for (double v : samples_)
    if (!std::isfinite(v)) throw Error("non_finite", "sample is not finite");
}

PeriodicFunction PeriodicFunction::from_function(std::size_t grid, const std::function<double(double)>& f) {
  check_grid(grid);
  std::vector<double> s(grid);
  for (std::size_t j = 0; j < grid; ++j) s[j] = f(double(j) / double(grid));
  return PeriodicFunction(std::move(s));
}

PeriodicFunction PeriodicFunction::constant(std::size_t grid, double c) {
  check_grid(grid);
  return PeriodicFunction(std::vector<double>(grid, c));
}

std::vector<std::complex<double>> PeriodicFunction::coefficients() const { return forward(samples_); }

PeriodicFunction PeriodicFunction::derivative(unsigned n) const {
  if (n == 0) throw Error("invalid_argument", "derivative order must be >= 1");
  auto c = coefficients();
  const std::size_t k = grid(), h = k / 2;
  const std::complex<double> i(0, 1);
  for (std::size_t m = 0; m <= h; ++m) {
    if (m == h && n % 2 == 1) {
      c[m] = 0;
      continue;
    }
    c[m] *= std::pow(i * (kTwoPi * double(m)), static_cast<int>(n));
  }
  if (n % 2 == 0) c[h] = c[h].real();
  return PeriodicFunction(backward(c, k));
}

std::vector<double> PeriodicFunction::evaluate(const std::vector<double>& x) const {
  return eval_series(series_of(*this), x);
}

double PeriodicFunction::operator()(double x) const { return evaluate({x})[0]; }

double PeriodicFunction::integral() const {
  return simd::kernels().sum(samples_.data(), samples_.size()) / double(samples_.size());
}

double PeriodicFunction::max_abs() const {
  double m = 0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double PeriodicFunction::top_mode_ratio() const {
  const auto c = coefficients();
  const std::size_t h = grid() / 2, start = h - h / 4;
  double all = 1, top = 0;
  for (std::size_t m = 0; m <= h; ++m) {
    all = std::max(all, std::abs(c[m]));
    if (m >= start) top = std::max(top, std::abs(c[m]));
  }
  return top / all;
}

PeriodicFunction PeriodicFunction::resampled(std::size_t k2) const {
  check_grid(k2);
  if (k2 < grid()) throw Error("invalid_grid", "resampling only refines");
  auto c = coefficients();
  const std::size_t h = grid() / 2;
  std::vector<std::complex<double>> c2(k2 / 2 + 1, 0);
  for (std::size_t m = 0; m < h; ++m) c2[m] = c[m];
  // The old Nyquist cosine splits evenly between modes +h and -h.
  c2[h] = (k2 > grid()) ? std::complex<double>(c[h].real() / 2) : c[h];
  return PeriodicFunction(backward(c2, k2));
}

PeriodicFunction PeriodicFunction::operator+(const PeriodicFunction& o) const {
  same_grid(*this, o);
  std::vector<double> s(grid());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = samples_[j] + o.samples_[j];
  return PeriodicFunction(std::move(s));
}

PeriodicFunction PeriodicFunction::operator-(const PeriodicFunction& o) const {
  same_grid(*this, o);
  std::vector<double> s(grid());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = samples_[j] - o.samples_[j];
  return PeriodicFunction(std::move(s));
}

PeriodicFunction PeriodicFunction::operator*(const PeriodicFunction& o) const {
  same_grid(*this, o);
  std::vector<double> s(grid());
  simd::kernels().mul(samples_.data(), o.samples_.data(), s.data(), s.size());
  return PeriodicFunction(std::move(s));
}

PeriodicFunction PeriodicFunction::scaled(double a) const {
  std::vector<double> s(samples_);
  for (auto& v : s) v *= a;
  return PeriodicFunction(std::move(s));
}

PeriodicFunction PeriodicFunction::map(const std::function<double(double)>& f) const {
  std::vector<double> s(samples_);
  for (auto& v : s) v = f(v);
  return PeriodicFunction(std::move(s));
}

double max_abs_difference(const PeriodicFunction& a, const PeriodicFunction& b) { return (a - b).max_abs(); }

// ---------------------------------------------------------------- CircleDiffeo

CircleDiffeo::CircleDiffeo(PeriodicFunction displacement) : xi_(std::move(displacement)) {
  const auto d = xi_.derivative(1);
  for (std::size_t j = 0; j < d.grid(); ++j)
    if (!(1 + d[j] > 0))
      throw Error("not_orientation_preserving", "phi' <= 0 at sample " + std::to_string(j));
}

CircleDiffeo CircleDiffeo::identity(std::size_t grid) { return CircleDiffeo(PeriodicFunction::constant(grid, 0)); }

CircleDiffeo CircleDiffeo::rotation(std::size_t grid, double t) {
  return CircleDiffeo(PeriodicFunction::constant(grid, t));
}

PeriodicFunction CircleDiffeo::derivative() const { return xi_.derivative(1).map([](double v) { return 1 + v; }); }

std::vector<double> CircleDiffeo::apply(const std::vector<double>& x) const {
  auto v = xi_.evaluate(x);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += x[j];
  return v;
}

std::vector<double> CircleDiffeo::nodes() const {
  std::vector<double> v(grid());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = double(j) / double(grid()) + xi_[j];
  return v;
}

CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi) {
  if (phi.grid() != psi.grid()) throw Error("dimension_mismatch", "diffeos live on different grids");
  // phi(psi(x)) - x = xi_psi(x) + xi_phi(psi(x))
  if (phi.displacement().top_mode_ratio() > kResolutionTolerance)
    throw Error("under_resolved", "displacement has energy in the top Fourier band");
  const auto at = phi.displacement().evaluate(psi.nodes());
  std::vector<double> s(psi.grid());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = psi.displacement()[j] + at[j];
  PeriodicFunction xi(std::move(s));
  if (xi.top_mode_ratio() > kResolutionTolerance)
    throw Error("under_resolved", "composed displacement has energy in the top Fourier band");
  return CircleDiffeo(std::move(xi));
}

CircleDiffeo product(const CircleDiffeo& g, const CircleDiffeo& h) { return compose(h, g); }

CircleDiffeo invert(const CircleDiffeo& phi) {
  const std::size_t k = phi.grid();
  const auto& xi = phi.displacement();
  const Series s = series_of(xi), ds = series_of(xi.derivative(1));
  // sup |xi| <= B, so y + xi(y) = x has its root in [x - B, x + B].
  double bound = std::abs(s.a0) + 1e-12;
  for (std::size_t m = 0; m < s.ca.size(); ++m) bound += std::hypot(s.ca[m], s.sb[m]);
  std::vector<double> eta(k);
  std::vector<double> pt(1);
  for (std::size_t j = 0; j < k; ++j) {
    const double x = double(j) / double(k);
    double lo = x - bound, hi = x + bound;
    double y = x - xi[j];
    for (int it = 0; it < 100; ++it) {
      pt[0] = y;
      const double f = y + eval_series(s, pt)[0] - x;
      if (std::abs(f) < 1e-14) break;
      if (f > 0) hi = std::min(hi, y);
      else lo = std::max(lo, y);
      const double fp = 1 + eval_series(ds, pt)[0];
      double next = y - f / fp;
      if (!(next > lo && next < hi)) next = (lo + hi) / 2;
      if (std::abs(next - y) < 1e-15) {
        y = next;
        break;
      }
      y = next;
    }
    pt[0] = y;
    if (std::abs(y + eval_series(s, pt)[0] - x) > 1e-12)
      throw Error("internal_error", "inverse root finding did not converge at sample " + std::to_string(j));
    eta[j] = y - x;
  }
  return CircleDiffeo(PeriodicFunction(std::move(eta)));
}

PeriodicFunction pull_back(const CircleDiffeo& phi, const PeriodicFunction& f) {
  if (phi.grid() != f.grid()) throw Error("dimension_mismatch", "diffeo and function grids differ");
  return PeriodicFunction(f.evaluate(phi.nodes()));
}

PeriodicFunction density_action(double lambda, const CircleDiffeo& phi, const PeriodicFunction& f) {
  auto g = pull_back(phi, f);
  if (lambda == 0) return g;
  const auto w = phi.derivative().map([lambda](double d) { return std::exp(lambda * std::log(d)); });
  return w * g;
}

// ---------------------------------------------------------------- cochains

PeriodicFunction DiffeoCochain::operator()(const std::vector<CircleDiffeo>& args) const {
  if (args.size() != degree) throw Error("dimension_mismatch", name + " takes " + std::to_string(degree) + " arguments");
  return eval(args);
}

DiffeoCochain named_cochain(const std::string& name) {
  DiffeoCochain c;
  c.name = name;
  c.degree = 1;
  if (name == "theta") {
    c.eval = [](const std::vector<CircleDiffeo>& a) {
      return a[0].derivative().map([](double d) { return std::log(d); });
    };
  } else if (name == "dtheta") {
    c.lambda = 1;
    c.eval = [](const std::vector<CircleDiffeo>& a) {
      const auto d1 = a[0].derivative();
      const auto d2 = a[0].displacement().derivative(2);
      std::vector<double> s(d1.grid());
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = d2[j] / d1[j];
      return PeriodicFunction(std::move(s));
    };
  } else if (name == "schwarzian") {
    c.lambda = 2;
    c.eval = [](const std::vector<CircleDiffeo>& a) {
      const auto d1 = a[0].derivative();
      const auto d2 = a[0].displacement().derivative(2);
      const auto d3 = a[0].displacement().derivative(3);
      std::vector<double> s(d1.grid());
      for (std::size_t j = 0; j < s.size(); ++j) {
        const double r = d2[j] / d1[j];
        s[j] = d3[j] / d1[j] - 1.5 * r * r;
      }
      return PeriodicFunction(std::move(s));
    };
  } else if (name == "L") {
    c.eval = [](const std::vector<CircleDiffeo>& a) { return a[0].displacement(); };
  } else if (name == "bott") {
    c.degree = 2;
    c.scalar = true;
    c.eval = [](const std::vector<CircleDiffeo>& a) {
      const auto& phi = a[0];
      const auto& psi = a[1];
      // (psi o phi)' = psi'(phi(x)) phi'(x);  d(log phi') = phi''/phi' dx
      const auto psi_d = psi.displacement().derivative(1).evaluate(phi.nodes());
      const auto phi_d = phi.derivative();
      const auto phi_dd = phi.displacement().derivative(2);
      std::vector<double> u(phi.grid()), v(phi.grid());
      for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] = std::log((1 + psi_d[j]) * phi_d[j]);
        v[j] = phi_dd[j] / phi_d[j];
      }
      const double value = -simd::kernels().dot(u.data(), v.data(), u.size()) / double(u.size());
      return PeriodicFunction::constant(phi.grid(), value);
    };
  } else {
    throw Error("unknown_cochain", "unknown group cochain '" + name + "'");
  }
  return c;
}

namespace {

CircleDiffeo product_of(const std::vector<CircleDiffeo>& g, std::size_t from, std::size_t to, std::size_t grid) {
  if (from == to) return CircleDiffeo::identity(grid);
  CircleDiffeo acc = g[from];
  for (std::size_t i = from + 1; i < to; ++i) acc = product(acc, g[i]);
  return acc;
}

}  // namespace

DiffeoCochain group_cup(const DiffeoCochain& a, const DiffeoCochain& b) {
  DiffeoCochain c;
  c.name = "(" + a.name + " u " + b.name + ")";
  c.degree = a.degree + b.degree;
  c.lambda = a.lambda + b.lambda;
  c.scalar = a.scalar && b.scalar;
  c.eval = [a, b](const std::vector<CircleDiffeo>& g) {
    const std::size_t p = a.degree;
    const std::size_t grid = g.front().grid();
    std::vector<CircleDiffeo> first(g.begin(), g.begin() + p), rest(g.begin() + p, g.end());
    const auto av = a(first);
    const auto bv = density_action(b.lambda, product_of(g, 0, p, grid), b(rest));
    return av * bv;
  };
  return c;
}

DiffeoCochain group_differential(const DiffeoCochain& f) {
  DiffeoCochain d;
  d.name = "d(" + f.name + ")";
  d.degree = f.degree + 1;
  d.lambda = f.lambda;
  d.scalar = f.scalar;
  d.eval = [f](const std::vector<CircleDiffeo>& g) {
    const std::size_t p = f.degree;
    std::vector<CircleDiffeo> sub(g.begin() + 1, g.end());
    PeriodicFunction acc = density_action(f.lambda, g[0], f(sub));
    for (std::size_t i = 1; i <= p; ++i) {
      std::vector<CircleDiffeo> merged;
      for (std::size_t k = 0; k <= p; ++k) {
        if (k == i) continue;
        merged.push_back(k == i - 1 ? product(g[i - 1], g[i]) : g[k]);
      }
      const auto v = f(merged);
      acc = (i % 2 == 0) ? acc + v : acc - v;
    }
    std::vector<CircleDiffeo> head(g.begin(), g.end() - 1);
    const auto last = f(head);
    acc = ((p + 1) % 2 == 0) ? acc + last : acc - last;
    return acc;
  };
  return d;
}

namespace {

CircleDiffeo curve_point(const PeriodicFunction& x, double t) {
  try {
    return CircleDiffeo(x.scaled(t));
  } catch (const Error& e) {
    if (e.code() == "not_orientation_preserving")
      throw Error("step_too_large", "id + t x is not a diffeomorphism at t = " + std::to_string(t));
    throw;
  }
}

PeriodicFunction first_difference(const DiffeoCochain& f, const PeriodicFunction& x, double h) {
  return (f({curve_point(x, h)}) - f({curve_point(x, -h)})).scaled(1 / (2 * h));
}

PeriodicFunction mixed_difference(const DiffeoCochain& f, const PeriodicFunction& x, const PeriodicFunction& y,
                                  double h) {
  const auto xp = curve_point(x, h), xm = curve_point(x, -h), yp = curve_point(y, h), ym = curve_point(y, -h);
  auto s = f({xp, yp}) - f({xp, ym}) - f({xm, yp}) + f({xm, ym});
  return s.scaled(1 / (4 * h * h));
}

template <class Fn>
PeriodicFunction extrapolated(const Fn& stencil, const DeriveOptions& opt) {
  const auto coarse = stencil(opt.eps);
  if (!opt.richardson) return coarse;
  const auto fine = stencil(opt.eps / 2);
  return (fine.scaled(4) - coarse).scaled(1.0 / 3.0);
}

}  // namespace

PeriodicFunction derive(const DiffeoCochain& f, const std::vector<PeriodicFunction>& x, const DeriveOptions& opt) {
  if (!(opt.eps > 0 && opt.eps < 0.1)) throw Error("invalid_argument", "eps must lie in (0, 0.1)");
  if (x.size() != f.degree) throw Error("dimension_mismatch", "need one direction per argument");
  if (f.degree == 1) return extrapolated([&](double h) { return first_difference(f, x[0], h); }, opt);
  if (f.degree == 2) {
    const auto a = extrapolated([&](double h) { return mixed_difference(f, x[0], x[1], h); }, opt);
    const auto b = extrapolated([&](double h) { return mixed_difference(f, x[1], x[0], h); }, opt);
    return a - b;
  }
  throw Error("unsupported_degree", "derive handles degrees 1 and 2");
}

// ---------------------------------------------------------------- Lie side

namespace {

struct LieName {
  enum Kind { alpha, omega, omega_bar } kind;
  unsigned n;
};

LieName parse_lie(const std::string& name) {
  auto num = [&](std::size_t pos) -> unsigned {
    if (pos >= name.size()) throw Error("unknown_cocycle", "unknown Lie cocycle '" + name + "'");
    for (std::size_t i = pos; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i])))
        throw Error("unknown_cocycle", "unknown Lie cocycle '" + name + "'");
    return static_cast<unsigned>(std::stoul(name.substr(pos)));
  };
  if (name.rfind("alpha_", 0) == 0) return {LieName::alpha, num(6)};
  if (name.rfind("omega_bar_", 0) == 0) return {LieName::omega_bar, num(10)};
  if (name.rfind("omega_", 0) == 0) return {LieName::omega, num(6)};
  throw Error("unknown_cocycle", "unknown Lie cocycle '" + name + "'");
}

PeriodicFunction nth(const PeriodicFunction& f, unsigned n) { return n == 0 ? f : f.derivative(n); }

}  // namespace

std::size_t lie_cocycle_degree(const std::string& name) { return parse_lie(name).kind == LieName::alpha ? 1 : 2; }

double lie_cocycle_weight(const std::string& name) {
  const auto p = parse_lie(name);
  if (p.kind == LieName::alpha) return p.n == 0 ? 0.0 : double(p.n) - 1;
  return double(p.n);
}

PeriodicFunction evaluate_lie_cocycle(const std::string& name, const std::vector<PeriodicFunction>& args) {
  const auto p = parse_lie(name);
  const std::size_t deg = p.kind == LieName::alpha ? 1 : 2;
  if (args.size() != deg) throw Error("dimension_mismatch", name + " takes " + std::to_string(deg) + " arguments");
  if (p.kind == LieName::alpha) return nth(args[0], p.n);
  const auto& x = args[0];
  const auto& y = args[1];
  if (p.kind == LieName::omega_bar) return x * nth(y, p.n + 1) - y * nth(x, p.n + 1);
  if (p.n == 0) {
    const double v = (x.derivative(1) * y.derivative(2) - x.derivative(2) * y.derivative(1)).integral();
    return PeriodicFunction::constant(x.grid(), v);
  }
  return x.derivative(1) * nth(y, p.n + 1) - y.derivative(1) * nth(x, p.n + 1);
}

PeriodicFunction lie_action(double lambda, const PeriodicFunction& x, const PeriodicFunction& f) {
  return x * f.derivative(1) + (x.derivative(1) * f).scaled(lambda);
}

PeriodicFunction vector_field_bracket(const PeriodicFunction& x, const PeriodicFunction& y) {
  return x * y.derivative(1) - x.derivative(1) * y;
}

PeriodicFunction lie_differential_1(double lambda, const std::function<PeriodicFunction(const PeriodicFunction&)>& h,
                                    const PeriodicFunction& x, const PeriodicFunction& y) {
  return lie_action(lambda, x, h(y)) - lie_action(lambda, y, h(x)) - h(vector_field_bracket(x, y));
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const PeriodicFunction& f) { return {{"grid", f.grid()}, {"samples", f.samples()}}; }

PeriodicFunction periodic_from_json(const nlohmann::json& j) {
  try {
    auto s = j.at("samples").get<std::vector<double>>();
    if (j.contains("grid") && j.at("grid").get<std::size_t>() != s.size())
      throw Error("parse_error", "grid does not match the sample count");
    return PeriodicFunction(std::move(s));
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", e.what());
  }
}

std::vector<PeriodicFunction> standard_directions(std::size_t grid) {
  const double tau = 2 * std::numbers::pi;
  return {
      PeriodicFunction::from_function(grid, [=](double t) { return std::sin(tau * t); }),
      PeriodicFunction::from_function(grid, [=](double t) { return std::cos(tau * t) + 0.2 * std::sin(2 * tau * t); }),
      PeriodicFunction::from_function(grid,
                                      [=](double t) { return 0.5 * std::cos(2 * tau * t) - 0.3 * std::sin(3 * tau * t); }),
      PeriodicFunction::from_function(
          grid, [=](double t) { return 0.4 * std::sin(tau * t) + 0.3 * std::cos(3 * tau * t) + 0.1; }),
      PeriodicFunction::from_function(grid,
                                      [=](double t) { return 0.25 * std::sin(4 * tau * t) + 0.5 * std::cos(tau * t); }),
  };
}

std::string derivation_target(const std::string& cochain) {
  static const std::map<std::string, std::string> targets{
      {"theta", "alpha_1"},          {"dtheta", "alpha_2"},        {"schwarzian", "alpha_3"},
      {"L", "alpha_0"},              {"bott", "omega_0"},          {"theta.dtheta", "omega_1"},
      {"theta.schwarzian", "omega_2"}, {"L.theta", "omega_bar_0"}, {"L.dtheta", "omega_bar_1"},
      {"L.schwarzian", "omega_bar_2"}};
  const auto it = targets.find(cochain);
  if (it == targets.end()) throw Error("unknown_cochain", "no derivation target for " + cochain);
  return it->second;
}

DiffeoCochain cochain_by_name(const std::string& name) {
  const auto dot = name.find('.');
  if (dot == std::string::npos) return named_cochain(name);
  return group_cup(named_cochain(name.substr(0, dot)), cochain_by_name(name.substr(dot + 1)));
}

}  // namespace lwb::circle

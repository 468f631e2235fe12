#include <doctest.h>

#include <cmath>
#include <random>

#include "lwb/error.hpp"
#include "lwb/flux/period_flux.hpp"

using namespace lwb;
using namespace lwb::flux;

namespace {

constexpr double kPi = M_PI;

Eigen::MatrixXd symplectic(double scale = 1) {
  Eigen::MatrixXd w(2, 2);
  w << 0, scale, -scale, 0;
  return w;
}

// beta = sin(x2) dx1 + x1 x3 dx2 + cos(x1) dx3 and its exterior derivative.
double beta_dot(const Point& p, const Point& v) {
  return std::sin(p[1]) * v[0] + p[0] * p[2] * v[1] + std::cos(p[0]) * v[2];
}
std::vector<double> d_beta(const Point& p, const Point& u, const Point& v) {
  Eigen::Matrix3d w;
  const double w12 = p[2] - std::cos(p[1]), w13 = -std::sin(p[0]), w23 = -p[0];
  w << 0, w12, w13, -w12, 0, w23, -w13, -w23, 0;
  const Eigen::Vector3d uu(u[0], u[1], u[2]), vv(v[0], v[1], v[2]);
  return {uu.dot(w * vv)};
}

Point patch(double t, double s) {
  return {0.3 + t + 0.2 * s * s, 0.5 * s - 0.1 * t, 0.2 + t * s};
}

// Boundary oracle for Stokes: the boundary line integral of beta, counterclockwise.
double boundary_integral(const std::function<Point(double, double)>& h) {
  const int n = 4000;
  double acc = 0;
  auto edge = [&](auto path) {
    double e = 0;
    for (int j = 0; j < n; ++j) {
      const double a = double(j) / n, b = double(j + 1) / n, m = 0.5 * (a + b);
      const Point pa = path(a), pb = path(b), pm = path(m);
      // Simpson on the chord parametrization.
      Point v(3);
      for (int i = 0; i < 3; ++i) v[i] = pb[i] - pa[i];
      e += (beta_dot(pa, v) + 4 * beta_dot(pm, v) + beta_dot(pb, v)) / 6;
    }
    return e;
  };
  acc += edge([&](double r) { return h(r, 0); });
  acc += edge([&](double r) { return h(1, r); });
  acc -= edge([&](double r) { return h(r, 1); });
  acc -= edge([&](double r) { return h(0, r); });
  return acc;
}

exact::Vector qv(std::initializer_list<long> xs) {
  exact::Vector v;
  for (long x : xs) v.push_back(exact::make_rational(x));
  return v;
}

PeriodicFunction probe(std::size_t k, double a, double b) {
  return PeriodicFunction::from_function(
      k, [=](double t) { return a * std::sin(2 * kPi * t) + b * std::cos(4 * kPi * t) + 0.25 * std::sin(6 * kPi * t); });
}

}  // namespace

TEST_CASE("surface integrals of constant forms") {
  const auto form = constant_form({symplectic()});
  const Point x{1.5, -0.25}, y{0.5, 2.0};
  SurfaceMap h{Domain::square, [&](double t, double s) { return Point{t * x[0] + s * y[0], t * x[1] + s * y[1]}; }};
  const double want = x[0] * y[1] - x[1] * y[0];
  CHECK(surface_integral(h, form).value[0] == doctest::Approx(want).epsilon(1e-12));
  SurfaceMap flat{Domain::square, [&](double t, double s) { return Point{(t + s) * x[0], (t + s) * x[1]}; }};
  CHECK(std::abs(surface_integral(flat, form).value[0]) < 1e-13);
  SurfaceMap tri{Domain::triangle, [](double t, double s) { return Point{t, s}; }};
  CHECK(surface_integral(tri, form).value[0] == doctest::Approx(0.5).epsilon(1e-12));
  h.resolution = 4;
  CHECK_THROWS_WITH_AS(surface_integral(h, form), doctest::Contains("invalid_argument"), Error);
}

TEST_CASE("surface integral of an exact form matches the boundary integral") {
  const auto got = surface_integral(SurfaceMap{Domain::square, patch}, d_beta).value[0];
  CHECK(got == doctest::Approx(boundary_integral(patch)).epsilon(1e-9));
}

TEST_CASE("closed form: homotopy invariance and a closed surface") {
  const auto base = surface_integral(SurfaceMap{Domain::square, patch}, d_beta).value[0];
  SurfaceMap wiggled{Domain::square, [](double t, double s) {
                       Point p = patch(t, s);
                       const double b = 0.3 * std::sin(kPi * t) * std::sin(kPi * s);
                       p[0] += b;
                       p[2] -= 0.5 * b;
                       return p;
                     }};
  CHECK(surface_integral(wiggled, d_beta).value[0] == doctest::Approx(base).epsilon(1e-8));
  // Embedded torus, periodic in both parameters.
  SurfaceMap torus{Domain::square, [](double t, double s) {
                     const double r = 2 + 0.7 * std::cos(2 * kPi * s);
                     return Point{r * std::cos(2 * kPi * t), r * std::sin(2 * kPi * t), 0.7 * std::sin(2 * kPi * s)};
                   }};
  CHECK(std::abs(surface_integral(torus, d_beta).value[0]) < 1e-9);
}

TEST_CASE("oscillatory surfaces are reported as unresolved") {
  SurfaceMap wild{Domain::square, [](double t, double s) { return Point{std::sin(300 * t) * s, std::cos(300 * s)}; }};
  QuadratureOptions opt;
  opt.max_resolution = 32;
  CHECK_THROWS_WITH_AS(surface_integral(wild, constant_form({symplectic()}), opt),
                       doctest::Contains("resolution_insufficient"), Error);
}

TEST_CASE("lattices") {
  const auto z2 = Lattice::integers(2);
  CHECK(z2.contains(qv({3, -7})));
  CHECK_FALSE(z2.contains(exact::Vector{exact::make_rational(1, 2), 0}));
  const auto l = Lattice::exact({{exact::make_rational(1, 2), 0}, {exact::make_rational(1, 2), 1}});
  CHECK(l.contains(exact::Vector{exact::make_rational(1, 2), 0}));
  CHECK(l.contains(qv({0, 1})));
  CHECK_FALSE(l.contains(exact::Vector{exact::make_rational(1, 4), 0}));
  CHECK(l.contains(std::vector<double>{1.0, 1.0}));
  CHECK_FALSE(l.contains(std::vector<double>{0.25, 0.0}));
  CHECK_THROWS_WITH_AS(Lattice::exact({qv({1, 2}), qv({2, 4})}), doctest::Contains("not_independent"), Error);
  CHECK_THROWS_WITH_AS(Lattice::approximate({{1.0}, {std::sqrt(2.0)}}), doctest::Contains("not_independent"), Error);
  const auto irr = Lattice::approximate({{std::sqrt(2.0)}});
  CHECK(irr.contains(std::vector<double>{-3 * std::sqrt(2.0)}));
  CHECK_FALSE(irr.contains(std::vector<double>{1.0}));
  CHECK(Lattice::zero(3).contains(qv({0, 0, 0})));
  CHECK_FALSE(Lattice::zero(1).contains(std::vector<double>{1e-3}));
}

TEST_CASE("torus commutator pairing") {
  const RationalMatrix w{qv({0, 1}), qv({-1, 0})};
  const auto p = torus_commutator_pairing({w}, Lattice::integers(2), Lattice::integers(1));
  CHECK(p.contained);
  CHECK(p.exact_verdict);
  CHECK((*p.exact_values)[0][1][0] == 1);
  CHECK(p.values[0][1][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.max_quadrature_error <= 1e-10);

  const RationalMatrix half{{0, exact::make_rational(1, 2)}, {exact::make_rational(-1, 2), 0}};
  const auto q = torus_commutator_pairing({half}, Lattice::integers(2), Lattice::integers(1));
  CHECK_FALSE(q.contained);
  REQUIRE(q.witness.has_value());
  CHECK(*q.witness == std::pair<std::size_t, std::size_t>{0, 1});
  // Halving Gamma_Z restores containment.
  CHECK(torus_commutator_pairing({half}, Lattice::integers(2), Lattice::exact({{exact::make_rational(1, 2)}})).contained);

  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> u(-5, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 4;
    RationalMatrix r(n, exact::zero_vector(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        r[i][j] = u(rng);
        r[j][i] = -r[i][j];
      }
    const auto res = torus_commutator_pairing({r}, Lattice::integers(n), Lattice::integers(1));
    CHECK(res.contained);
    CHECK(res.max_quadrature_error <= 1e-10);
  }
  CHECK_THROWS_WITH_AS(torus_commutator_pairing({RationalMatrix{qv({0, 1}), qv({1, 0})}}, Lattice::integers(2),
                                                Lattice::integers(1)),
                       doctest::Contains("not_alternating"), Error);
}

TEST_CASE("loops: construction and closure") {
  const auto rot = LoopInGroup::rotation(64);
  CHECK(rot.closed());
  CHECK(rot.winding() == 1);
  CHECK(rot.reversed().winding() == -1);
  CHECK_THROWS_WITH_AS(LoopInGroup::rotation(64, 48), doctest::Contains("invalid_grid"), Error);
  const auto arc = LoopInGroup::from_function(64, [](double t) { return CircleDiffeo::rotation(64, 0.5 * t); });
  CHECK_FALSE(arc.closed());
  const auto full = concatenate(arc, arc);
  CHECK(full.closed());
  CHECK(full.intervals() == 128);
  CHECK(full.breaks() == std::vector<std::size_t>{64});
}

TEST_CASE("rotation loop fluxes") {
  const std::size_t k = 128;
  const auto rot = LoopInGroup::rotation(k);
  const auto eta = probe(k, 1.0, 0.5);
  for (int lambda : {0, 1, 2}) {
    const auto i = flux_line_integral(lie_two_cocycle("omega_bar_" + std::to_string(lambda)), rot, eta);
    CHECK((i + eta.derivative(unsigned(lambda + 1))).max_abs() <= 1e-6);
  }
  for (const char* name : {"omega_0", "omega_1", "omega_2"})
    CHECK(flux_line_integral(lie_two_cocycle(name), rot, eta).max_abs() <= 1e-8);
  const auto still = LoopInGroup::constant(CircleDiffeo::rotation(k, 0.2));
  CHECK(flux_line_integral(lie_two_cocycle("omega_bar_1"), still, eta).max_abs() == 0);
  CHECK_THROWS_WITH_AS(lie_two_cocycle("alpha_2"), doctest::Contains("unknown_cocycle"), Error);
}

TEST_CASE("open paths with non-uniform speed") {
  // R_{q(t)} with q(t) = 0.3 sin(pi t / 2): I = -(q(1) - q(0)) eta''.
  const std::size_t k = 64;
  const auto path = LoopInGroup::from_function(
      64, [k](double t) { return CircleDiffeo::rotation(k, 0.3 * std::sin(kPi * t / 2)); });
  const auto eta = probe(k, 0.7, -0.2);
  const auto i = flux_line_integral(lie_two_cocycle("omega_bar_1"), path, eta);
  CHECK((i + eta.derivative(2).scaled(0.3)).max_abs() <= 1e-8 * eta.derivative(2).max_abs());
}

TEST_CASE("flux composition formula and inverse paths") {
  const std::size_t k = 64;
  const auto w = lie_two_cocycle("omega_bar_1");
  const auto eta = probe(k, 1.0, 0.3);
  const auto arc = LoopInGroup::from_function(64, [k](double t) { return CircleDiffeo::rotation(k, 0.5 * t); });
  const auto r = flux_cocycle_property(w, arc, arc, eta);
  CHECK(r.composition_error <= 1e-7 * eta.derivative(2).max_abs());
  CHECK(r.inverse_error <= 1e-9);
  const auto whole = flux_value(w, LoopInGroup::rotation(k), eta);
  CHECK((r.concatenated - whole).max_abs() <= 1e-7 * whole.max_abs());

  const auto still = LoopInGroup::constant(CircleDiffeo::rotation(k, 0.1));
  const auto c = flux_cocycle_property(w, arc, still, eta);
  CHECK(c.composition_error <= 1e-9);

  // A deformed path in general position.
  auto bent = LoopInGroup::from_function(64, [k](double t) {
    return CircleDiffeo(PeriodicFunction::from_function(
        k, [t](double x) { return 0.4 * t + 0.03 * std::sin(kPi * t) * std::sin(2 * kPi * x); }));
  });
  const auto b = flux_cocycle_property(w, bent, bent, eta);
  CHECK(b.composition_error <= 1e-6 * b.sum.max_abs());
  CHECK(b.inverse_error <= 1e-9 * b.sum.max_abs());
}

TEST_CASE("flux of a closed loop is a Lie cocycle and its class is a homotopy invariant") {
  const std::size_t k = 128;
  const auto loop = LoopInGroup::from_function(64, [k](double t) {
    return CircleDiffeo(PeriodicFunction::from_function(k, [t](double x) {
      return t + 0.02 * std::sin(2 * kPi * t) * std::sin(2 * kPi * x) +
             0.01 * (1 - std::cos(2 * kPi * t)) * std::cos(4 * kPi * x);
    }));
  });
  REQUIRE(loop.closed());
  const auto w = lie_two_cocycle("omega_bar_1");
  auto f = [&](const PeriodicFunction& x) { return flux_value(w, loop, x); };
  const auto x = probe(k, 1.0, 0.4), y = probe(k, -0.3, 1.0);
  const auto d = circle::lie_differential_1(1, f, x, y);
  CHECK(d.max_abs() <= 1e-6 * f(x).max_abs());

  const auto c_rot = flux_class(w, LoopInGroup::rotation(k), {"alpha_2"});
  CHECK(c_rot.coordinates[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c_rot.relative_residual < 1e-9);
  const auto c_bent = flux_class(w, loop, {"alpha_2"}, 6);
  CHECK(c_bent.coordinates[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("periods of Lie 1-cocycles on the rotation loop") {
  const std::size_t k = 64;
  const auto rot = LoopInGroup::rotation(k);
  const auto p0 = loop_period_1cocycle(lie_one_cocycle("alpha_0"), rot);
  CHECK((p0 - PeriodicFunction::constant(k, 1)).max_abs() <= 1e-9);
  CHECK(loop_period_1cocycle(lie_one_cocycle("alpha_1"), rot).max_abs() <= 1e-9);
  CHECK(loop_period_1cocycle(lie_one_cocycle("alpha_0"), LoopInGroup::constant(CircleDiffeo::identity(k))).max_abs() ==
        0);
  CHECK_THROWS_WITH_AS(lie_one_cocycle("omega_1"), doctest::Contains("unknown_cocycle"), Error);
}

TEST_CASE("simplex cocycle in the abelian chart") {
  const auto chart = abelian_chart(2);
  const Eigen::MatrixXd w = symplectic(3.0);
  const Point x{0.7, -0.2}, y{0.1, 1.3};
  const double om = 3.0 * (x[0] * y[1] - x[1] * y[0]);
  auto f = [&](const Point& a, const Point& b) { return simplex_cocycle(chart, w, a, b); };
  CHECK(f(x, y) == doctest::Approx(0.5 * om).epsilon(1e-10));
  CHECK(std::abs(f(x, {0, 0})) < 1e-14);
  CHECK(std::abs(f({0, 0}, y)) < 1e-14);
  CHECK(alternated_second_derivative(f, x, y) == doctest::Approx(om).epsilon(1e-6));
  // d_G f = 0 with the trivial action.
  const Point z{-0.4, 0.5};
  auto sum = [](const Point& a, const Point& b) { return Point{a[0] + b[0], a[1] + b[1]}; };
  CHECK(std::abs(f(y, z) - f(sum(x, y), z) + f(x, sum(y, z)) - f(x, y)) < 1e-12);
}

TEST_CASE("simplex cocycle in the Heisenberg chart") {
  const auto chart = heisenberg_chart(5.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = 1;
  w(1, 0) = -1;
  w(0, 2) = 0.5;
  w(2, 0) = -0.5;
  auto f = [&](const Point& a, const Point& b) { return simplex_cocycle(chart, w, a, b); };
  const Point x{0.3, -0.6, 0.2}, y{0.5, 0.1, -0.4};
  CHECK(std::abs(f(x, {0, 0, 0})) < 1e-12);
  CHECK(std::abs(f({0, 0, 0}, y)) < 1e-12);
  const double om = x[0] * y[1] - x[1] * y[0] + 0.5 * (x[0] * y[2] - x[2] * y[0]);
  CHECK(alternated_second_derivative(f, x, y) == doctest::Approx(om).epsilon(1e-6));
  CHECK_THROWS_WITH_AS(f({6, 0, 0}, y), doctest::Contains("chart_region_exceeded"), Error);
  CHECK_THROWS_WITH_AS(f({4.5, 0, 0}, {0, 4.5, 0}), doctest::Contains("chart_region_exceeded"), Error);
}

TEST_CASE("integrability decisions") {
  IntegrabilityData ok;
  ok.exact_periods = std::vector<exact::Vector>{qv({1})};
  ok.periods = {{1.0}};
  ok.flux_values = {{0.0}};
  CHECK(integrability_decision(ok, Lattice::integers(1)).verdict == Verdict::integrable);

  IntegrabilityData irr;
  irr.periods = {{std::sqrt(2.0)}};
  const auto v = integrability_decision(irr, Lattice::integers(1));
  CHECK(v.verdict == Verdict::obstructed_period);
  CHECK(v.witness["generator"] == 0);

  // Rotation flux of omega_bar_1 with connected A = F_1.
  const auto cls = flux_class(lie_two_cocycle("omega_bar_1"), LoopInGroup::rotation(64), {"alpha_2"});
  IntegrabilityData diff;
  diff.flux_values = {cls.coordinates};
  const auto d = integrability_decision(diff, Lattice::zero(1));
  CHECK(d.verdict == Verdict::obstructed_flux);
  const auto j = to_json(d);
  CHECK(j["verdict"] == "obstructed_flux");
  CHECK(j["witness"]["value"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  // A flux inside the characteristic image is admissible.
  IntegrabilityData image;
  image.flux_values = {{2.0, 1.0}};
  image.characteristic_image = {{4.0, 2.0}};
  CHECK(integrability_decision(image, Lattice::zero(2)).verdict == Verdict::integrable);
  image.flux_values = {{2.0, 1.5}};
  CHECK(integrability_decision(image, Lattice::zero(2)).verdict == Verdict::obstructed_flux);

  // omega_0 has no rotation flux.
  const auto c0 = flux_class(lie_two_cocycle("omega_0"), LoopInGroup::rotation(64), {});
  CHECK(c0.coordinates.empty());
}

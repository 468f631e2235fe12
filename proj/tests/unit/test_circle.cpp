#include <doctest.h>

#include <cmath>
#include <random>

#include "lwb/circle/diff_circle.hpp"
#include "lwb/error.hpp"

using namespace lwb::circle;

namespace {

constexpr double kPi = M_PI;

PeriodicFunction fn(std::size_t k, double (*f)(double)) { return PeriodicFunction::from_function(k, f); }

double rel_error(const PeriodicFunction& got, const PeriodicFunction& want) {
  return (got - want).max_abs() / std::max(want.max_abs(), 1e-300);
}

// Small random trigonometric displacement, degree <= 3, so max of xi' is at most 14 pi amp.
CircleDiffeo random_diffeo(std::mt19937_64& rng, std::size_t k, double amp = 0.01) {
  std::uniform_real_distribution<double> u(-amp, amp);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), e = u(rng);
  return CircleDiffeo(PeriodicFunction::from_function(k, [=](double t) {
    return a * std::sin(2 * kPi * t) + b * std::cos(2 * kPi * t) + c * std::sin(4 * kPi * t) +
           d * std::cos(6 * kPi * t) + e;
  }));
}

PeriodicFunction random_direction(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  return PeriodicFunction::from_function(k, [=](double t) {
    return a * std::sin(2 * kPi * t) + b * std::cos(2 * kPi * t) + c * std::sin(4 * kPi * t) + d * 0.5;
  });
}

}  // namespace

TEST_CASE("spectral derivatives") {
  const auto s = fn(64, [](double t) { return std::sin(2 * kPi * t); });
  const auto c = fn(64, [](double t) { return 2 * kPi * std::cos(2 * kPi * t); });
  CHECK((s.derivative(1) - c).max_abs() <= 1e-10);
  CHECK(PeriodicFunction::constant(64, 3.5).derivative(2).max_abs() < 1e-12);
  const auto c4 = fn(64, [](double t) { return std::cos(4 * kPi * t); });
  const auto d3 = fn(64, [](double t) { return std::pow(4 * kPi, 3) * std::sin(4 * kPi * t); });
  CHECK((c4.derivative(3) - d3).max_abs() <= 1e-8 * std::pow(4 * kPi, 3));
  CHECK_THROWS_AS(s.derivative(0), lwb::Error);
  CHECK_THROWS_WITH_AS(PeriodicFunction(std::vector<double>(24, 0.0)), doctest::Contains("invalid_grid"), lwb::Error);
  CHECK_THROWS_WITH_AS(PeriodicFunction(std::vector<double>(8, 0.0)), doctest::Contains("invalid_grid"), lwb::Error);
}

TEST_CASE("interpolation, integration and refinement") {
  const auto f = fn(32, [](double t) { return std::sin(2 * kPi * t) + 0.3 * std::cos(6 * kPi * t) + 0.1; });
  for (double x : {0.013, 0.5, 0.77, -0.2, 1.4})
    CHECK(f(x) == doctest::Approx(std::sin(2 * kPi * x) + 0.3 * std::cos(6 * kPi * x) + 0.1).epsilon(1e-13));
  CHECK(f.integral() == doctest::Approx(0.1).epsilon(1e-14));
  const auto g = f.resampled(128);
  CHECK(g(0.3141) == doctest::Approx(f(0.3141)).epsilon(1e-13));
  // Nyquist cosine survives refinement.
  const auto ny = fn(16, [](double t) { return std::cos(16 * kPi * t); });
  CHECK(ny.resampled(64)(0.125 / 2) == doctest::Approx(ny(0.125 / 2)).epsilon(1e-12));
  const auto back = periodic_from_json(to_json(f));
  CHECK(back.samples() == f.samples());
}

TEST_CASE("diffeomorphisms: composition and inversion") {
  std::mt19937_64 rng(5);
  const std::size_t k = 128;
  const auto id = CircleDiffeo::identity(k);
  for (int trial = 0; trial < 5; ++trial) {
    const auto phi = random_diffeo(rng, k, 0.015);
    CHECK((compose(phi, id).displacement() - phi.displacement()).max_abs() < 1e-14);
    CHECK((compose(id, phi).displacement() - phi.displacement()).max_abs() < 1e-13);
    CHECK(compose(phi, invert(phi)).displacement().max_abs() <= 1e-9);
    CHECK(compose(invert(phi), phi).displacement().max_abs() <= 1e-9);
  }
  const auto r = invert(CircleDiffeo::rotation(k, 0.3));
  CHECK((r.displacement() - PeriodicFunction::constant(k, -0.3)).max_abs() < 1e-12);
  CHECK_THROWS_WITH_AS(CircleDiffeo(fn(64, [](double t) { return 0.2 * std::sin(2 * kPi * t); })),
                       doctest::Contains("not_orientation_preserving"), lwb::Error);
  // Mode 7 of 8 on a 16-point grid.
  const auto coarse = CircleDiffeo(fn(16, [](double t) { return 0.001 * std::sin(14 * kPi * t); }));
  CHECK_THROWS_WITH_AS(compose(coarse, CircleDiffeo::rotation(16, 0.1)), doctest::Contains("under_resolved"),
                       lwb::Error);
}

TEST_CASE("density action is a left action of the opposite group") {
  std::mt19937_64 rng(9);
  const std::size_t k = 128;
  const auto f = random_direction(rng, k);
  CHECK((density_action(1.5, CircleDiffeo::identity(k), f) - f).max_abs() < 1e-14);
  for (double lambda : {0.0, 1.0, 2.0, 0.5, -1.0}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto g = random_diffeo(rng, k), h = random_diffeo(rng, k);
      const auto lhs = density_action(lambda, product(g, h), f);
      const auto rhs = density_action(lambda, g, density_action(lambda, h, f));
      CHECK((lhs - rhs).max_abs() <= 1e-8);
    }
  }
  const auto g = random_diffeo(rng, k);
  CHECK((density_action(0, g, f) - pull_back(g, f)).max_abs() == 0);
}

TEST_CASE("named group cochains") {
  const std::size_t k = 128;
  const auto id = CircleDiffeo::identity(k);
  std::mt19937_64 rng(13);
  const auto psi = random_diffeo(rng, k);
  CHECK(named_cochain("theta")({id}).max_abs() == 0);
  CHECK(named_cochain("schwarzian")({id}).max_abs() == 0);
  CHECK(named_cochain("bott")({id, psi}).max_abs() < 1e-15);
  CHECK(named_cochain("bott")({psi, id}).max_abs() < 1e-15);
  CHECK(named_cochain("schwarzian")({CircleDiffeo::rotation(k, 0.37)}).max_abs() == 0);
  CHECK_THROWS_WITH_AS(named_cochain("virasoro"), doctest::Contains("unknown_cochain"), lwb::Error);

  // theta(gh) = g.theta(h) + theta(g), spelled out without d_G.
  const auto theta = named_cochain("theta");
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_diffeo(rng, k), h = random_diffeo(rng, k);
    const auto lhs = theta({product(g, h)});
    const auto rhs = pull_back(g, theta({h})) + theta({g});
    CHECK((lhs - rhs).max_abs() <= 1e-8);
  }
}

TEST_CASE("named cochains are group cocycles") {
  const std::size_t k = 128;
  std::mt19937_64 rng(17);
  for (const char* name : {"theta", "dtheta", "schwarzian", "L", "bott"}) {
    const auto f = named_cochain(name);
    const auto d = group_differential(f);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<CircleDiffeo> args;
      for (std::size_t i = 0; i <= f.degree; ++i) args.push_back(random_diffeo(rng, k));
      CHECK_MESSAGE(d(args).max_abs() <= 1e-6, name);
    }
  }
  for (const auto& pair : {std::pair<const char*, const char*>{"theta", "dtheta"}, {"theta", "schwarzian"},
                           {"L", "theta"}, {"L", "schwarzian"}}) {
    const auto b = group_cup(named_cochain(pair.first), named_cochain(pair.second));
    const auto d = group_differential(b);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<CircleDiffeo> args{random_diffeo(rng, k), random_diffeo(rng, k),
                                     random_diffeo(rng, k)};
      CHECK_MESSAGE(d(args).max_abs() <= 1e-6, b.name);
    }
  }
}

TEST_CASE("a non-cocycle is caught by d_G") {
  const std::size_t k = 128;
  std::mt19937_64 rng(19);
  DiffeoCochain sq{"xi^2", 1, 0, false,
                   [](const std::vector<CircleDiffeo>& a) { return a[0].displacement() * a[0].displacement(); }};
  const auto d = group_differential(sq);
  CHECK(d({random_diffeo(rng, k), random_diffeo(rng, k)}).max_abs() > 1e-6);
}

TEST_CASE("cup with the zero cochain vanishes") {
  const std::size_t k = 64;
  std::mt19937_64 rng(23);
  DiffeoCochain zero{"0", 1, 2, false,
                     [k](const std::vector<CircleDiffeo>&) { return PeriodicFunction::constant(k, 0); }};
  const auto c = group_cup(named_cochain("theta"), zero);
  CHECK(c({random_diffeo(rng, k), random_diffeo(rng, k)}).max_abs() == 0);
  CHECK(c.lambda == 2);
}

TEST_CASE("derivation maps recover the Lie cocycles") {
  const std::size_t k = 256;
  const auto xi = fn(k, [](double t) { return std::sin(2 * kPi * t); });
  const auto eta = fn(k, [](double t) { return std::cos(2 * kPi * t) + 0.2 * std::sin(4 * kPi * t); });
  CHECK(rel_error(derive(named_cochain("theta"), {xi}), xi.derivative(1)) <= 1e-5);
  CHECK(rel_error(derive(named_cochain("dtheta"), {xi}), xi.derivative(2)) <= 1e-4);
  CHECK(rel_error(derive(named_cochain("schwarzian"), {xi}), xi.derivative(3)) <= 1e-4);
  CHECK(rel_error(derive(named_cochain("L"), {xi}), xi) <= 1e-12);
  const auto b = derive(named_cochain("bott"), {xi, eta});
  const auto w = evaluate_lie_cocycle("omega_0", {xi, eta});
  CHECK(rel_error(b, w) <= 1e-4);
  CHECK(b[0] < 0);  // -8 pi^3 for this pair

  // Cup products differentiate to wedge products.
  const auto tS = group_cup(named_cochain("theta"), named_cochain("schwarzian"));
  CHECK(rel_error(derive(tS, {xi, eta}), evaluate_lie_cocycle("omega_2", {xi, eta})) <= 1e-3);
  const auto tdt = group_cup(named_cochain("theta"), named_cochain("dtheta"));
  CHECK(rel_error(derive(tdt, {xi, eta}), evaluate_lie_cocycle("omega_1", {xi, eta})) <= 1e-3);
  const auto Lt = group_cup(named_cochain("L"), named_cochain("theta"));
  CHECK(rel_error(derive(Lt, {xi, eta}), evaluate_lie_cocycle("omega_bar_0", {xi, eta})) <= 1e-3);
  const auto LS = group_cup(named_cochain("L"), named_cochain("schwarzian"));
  CHECK(rel_error(derive(LS, {xi, eta}), evaluate_lie_cocycle("omega_bar_2", {xi, eta})) <= 1e-3);
}

TEST_CASE("derive refuses steps that leave the group") {
  const auto fast = fn(256, [](double t) { return std::sin(6 * kPi * t); });
  CHECK_THROWS_WITH_AS(derive(named_cochain("theta"), {fast}, {0.09, true}), doctest::Contains("step_too_large"),
                       lwb::Error);
  CHECK_NOTHROW(derive(named_cochain("theta"), {fast}, {0.01, true}));
  CHECK_THROWS_WITH_AS(derive(named_cochain("theta"), {fast}, {0.2, true}), doctest::Contains("invalid_argument"),
                       lwb::Error);
}

TEST_CASE("derivatives are stable under grid refinement") {
  auto at = [](std::size_t k) {
    const auto xi = PeriodicFunction::from_function(k, [](double t) { return std::sin(2 * kPi * t) + 0.3 * std::cos(4 * kPi * t); });
    return derive(named_cochain("schwarzian"), {xi});
  };
  const auto coarse = at(128), fine = at(256);
  CHECK((fine - coarse.resampled(256)).max_abs() <= 1e-8 * fine.max_abs());
}

TEST_CASE("Lie cocycle evaluation") {
  const std::size_t k = 128;
  const auto c = fn(k, [](double t) { return std::cos(2 * kPi * t); });
  const auto s = fn(k, [](double t) { return std::sin(2 * kPi * t); });
  CHECK(evaluate_lie_cocycle("omega_1", {c, c}).max_abs() < 1e-9);
  // cos' sin'' - sin' cos'' = 8 pi^3 (sin^2 + cos^2): a constant.
  const auto w = evaluate_lie_cocycle("omega_1", {c, s});
  CHECK((w - PeriodicFunction::constant(k, 8 * std::pow(kPi, 3))).max_abs() < 1e-9);

  // omega_0(sin, cos) against plain quadrature of the analytic jets.
  double oracle = 0;
  const int n = 20000;
  for (int j = 0; j < n; ++j) {
    const double t = (j + 0.5) / n, a = 2 * kPi;
    const double xp = a * std::cos(a * t), xpp = -a * a * std::sin(a * t);
    const double yp = -a * std::sin(a * t), ypp = -a * a * std::cos(a * t);
    oracle += (xp * ypp - xpp * yp) / n;
  }
  CHECK(evaluate_lie_cocycle("omega_0", {s, c})[0] == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(lie_cocycle_weight("alpha_3") == 2);
  CHECK(lie_cocycle_weight("omega_bar_1") == 1);
  CHECK_THROWS_WITH_AS(evaluate_lie_cocycle("beta_2", {c}), doctest::Contains("unknown_cocycle"), lwb::Error);
}

TEST_CASE("named Lie cocycles are closed under the numeric differential") {
  // d of alpha_n in F_{n-1}: x.alpha(y) - y.alpha(x) - alpha([x,y]).
  const std::size_t k = 128;
  std::mt19937_64 rng(29);
  const auto x = random_direction(rng, k), y = random_direction(rng, k);
  for (unsigned n : {1u, 2u, 3u}) {
    auto alpha = [n](const PeriodicFunction& f) { return f.derivative(n); };
    const auto d = lie_differential_1(double(n) - 1, alpha, x, y);
    CHECK(d.max_abs() <= 1e-8 * std::pow(2 * kPi, n + 2));
  }
  auto a0 = [](const PeriodicFunction& f) { return f; };
  CHECK(lie_differential_1(0, a0, x, y).max_abs() <= 1e-9);
  auto a4 = [](const PeriodicFunction& f) { return f.derivative(4); };
  CHECK(lie_differential_1(3, a4, x, y).max_abs() > 1);
}

TEST_CASE("derivation is a chain map on random 1-cochains") {
  const std::size_t k = 256;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = double(trial % 3);
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), q0 = u(rng), q1 = u(rng);
    // h(phi) = c0 xi + c1 xi' + c2 xi'' + q0 xi xi' + q1 xi'^2
    DiffeoCochain h{"h", 1, lambda, false, [=](const std::vector<CircleDiffeo>& a) {
                      const auto& xi = a[0].displacement();
                      const auto d1 = xi.derivative(1), d2 = xi.derivative(2);
                      return xi.scaled(c0) + d1.scaled(c1) + d2.scaled(c2) + (xi * d1).scaled(q0) +
                             (d1 * d1).scaled(q1);
                    }};
    auto dh = [=](const PeriodicFunction& f) {
      return f.scaled(c0) + f.derivative(1).scaled(c1) + f.derivative(2).scaled(c2);
    };
    const auto x = random_direction(rng, k), y = random_direction(rng, k);
    CHECK(rel_error(derive(h, {x}), dh(x)) <= 1e-5);
    const auto lhs = derive(group_differential(h), {x, y});
    const auto rhs = lie_differential_1(lambda, dh, x, y);
    CHECK(rel_error(lhs, rhs) <= 1e-3);
  }
  // h(phi) = int (phi - id), a real-valued cochain.
  DiffeoCochain mean{"int L", 1, 0, true, [](const std::vector<CircleDiffeo>& a) {
                       return PeriodicFunction::constant(a[0].grid(), a[0].displacement().integral());
                     }};
  auto dmean = [](const PeriodicFunction& f) { return PeriodicFunction::constant(f.grid(), f.integral()); };
  const auto x = random_direction(rng, k), y = random_direction(rng, k);
  CHECK(rel_error(derive(group_differential(mean), {x, y}), lie_differential_1(0, dmean, x, y)) <= 1e-3);
}

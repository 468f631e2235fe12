#include <doctest.h>

#include "lwb/ce/complex.hpp"
#include "lwb/error.hpp"
#include "lwb/witt/witt.hpp"

using namespace lwb::witt;

namespace {

// Oracle for the determinant cocycles: the k-th normalized derivative of the
// mode f_a is a^k f_a, so a jet expression evaluated on (f_a, f_b) is a product
// of these factors times f_{a+b}.
Rational jet(long a, unsigned k) {
  Rational r(1);
  for (unsigned i = 0; i < k; ++i) r *= a;
  return r;
}

}  // namespace

TEST_CASE("normalization closed forms are a representation") {
  std::mt19937_64 rng(8);
  for (long l : {-3, 0, 1, 2, 5}) CHECK(WittSpec{Rational(l)}.spot_check(rng, 300) == 0);
  CHECK(WittSpec{lwb::exact::make_rational(1, 3)}.spot_check(rng, 300) == 0);
}

TEST_CASE("standard cocycle coefficients") {
  const auto a0 = standard_cocycle(StandardName::alpha, Rational(0), 6, 0);
  for (long a = -6; a <= 6; ++a) CHECK(a0.coeff({a}) == 1);

  // omega_bar_1 = xi eta'' - eta xi'', omega_1 = xi' eta'' - xi'' eta'
  const auto wb = standard_cocycle(StandardName::omega_bar, Rational(1), 6);
  const auto w1 = standard_cocycle(StandardName::omega, Rational(1), 6);
  for (const auto& t : window_tuples(6, 2)) {
    const long a = t[0], b = t[1];
    CHECK(wb.coeff(t) == jet(a, 0) * jet(b, 2) - jet(b, 0) * jet(a, 2));
    CHECK(w1.coeff(t) == jet(a, 1) * jet(b, 2) - jet(a, 2) * jet(b, 1));
    CHECK(w1.coeff({b, a}) == -w1.coeff(t));
  }
  const auto w0 = standard_cocycle("omega_0", Rational(0), 4);
  CHECK(w0.coeff({-2, 2}) == Rational(-2 * 2 * 4));
  CHECK(w0.coeff({-1, 2}) == 0);

  CHECK_THROWS_AS(standard_cocycle(StandardName::alpha, Rational(3), 4, 2), lwb::Error);
  CHECK_THROWS_AS(standard_cocycle(StandardName::omega, Rational(3), 4), lwb::Error);
  CHECK_THROWS_AS(standard_cocycle("beta_2", Rational(3), 4), lwb::Error);
  CHECK_NOTHROW(standard_cocycle(StandardName::alpha, lwb::exact::make_rational(7, 2), 4, 1));
}

TEST_CASE("every standard cocycle is closed in its window") {
  struct Named {
    std::string name;
    long lambda;
  };
  const std::vector<Named> all = {{"alpha_0", 0}, {"alpha_1", 0}, {"alpha_1", 3}, {"alpha_2", 1},
                                  {"alpha_3", 2}, {"omega_bar_0", 0}, {"omega_bar_1", 1}, {"omega_bar_2", 2},
                                  {"omega_0", 0}, {"omega_1", 1}, {"omega_2", 2}};
  for (const auto& n : all) {
    const auto w = standard_cocycle(n.name, Rational(n.lambda), 8);
    const auto dw = graded_differential(Rational(n.lambda), w);
    CHECK_MESSAGE(dw.is_zero(), n.name);
  }
  // alpha_0 is not closed away from lambda = 0: d alpha_0 (a, b) = lambda (a - b)
  GradedCochain a0(1, 0, 5);
  for (long a = -5; a <= 5; ++a) a0.set({a}, Rational(1));
  const auto d = graded_differential(Rational(2), a0);
  CHECK(d.coeff({1, 3}) == 2 * (1 - 3));
}

TEST_CASE("graded wedge and insertion") {
  const auto a = standard_cocycle(StandardName::alpha, Rational(0), 5, 0);
  CHECK(graded_wedge(a, a).is_zero());
  const auto a1 = standard_cocycle(StandardName::alpha, Rational(0), 5, 1);
  const auto a2 = standard_cocycle(StandardName::alpha, Rational(1), 5, 2);
  const auto w = graded_wedge(a1, a2);
  CHECK(w.coeff({2, 3}) == 2 * 9 - 3 * 4);
  const auto i = graded_insertion(2, w);
  CHECK(i.degree() == 1);
  CHECK(i.internal_degree() == 2);
  CHECK(i.coeff({3}) == w.coeff({2, 3}));
  CHECK_THROWS_AS(graded_insertion(0, graded_insertion(1, a)), lwb::Error);
}

TEST_CASE("cup identities") {
  for (long l : {1, 2}) {
    const auto r = cup_identity_check(Rational(l), 10);
    CHECK(r.omega_bar_identity);
    CHECK(r.omega_identity);
    CHECK(r.pairs_checked == window_tuples(10, 2).size());
  }
  CHECK_THROWS_AS(cup_identity_check(Rational(3)), lwb::Error);
}

TEST_CASE("windowed H^2 for lambda = 1 at (16, 12)") {
  const auto r = homogeneous_cohomology(Rational(1), 2, 16, 12);
  CHECK(r.dim_cohomology == 2);
  CHECK(r.stabilized);
  const auto wb = standard_cocycle(StandardName::omega_bar, Rational(1), 12);
  const auto w1 = standard_cocycle(StandardName::omega, Rational(1), 12);
  CHECK(in_span_mod_coboundaries(Rational(1), wb, r.representatives, 12));
  CHECK(in_span_mod_coboundaries(Rational(1), w1, r.representatives, 12));
  for (const auto& rep : r.representatives) CHECK(in_span_mod_coboundaries(Rational(1), rep, {wb, w1}, 12));
  // the two named cocycles are independent modulo coboundaries
  CHECK_FALSE(in_span_mod_coboundaries(Rational(1), wb, {w1}, 12));
}

TEST_CASE("windowed cohomology small cases") {
  CHECK(homogeneous_cohomology(Rational(3), 2, 10, 6).dim_cohomology == 0);
  const auto h1 = homogeneous_cohomology(Rational(0), 1, 10, 6);
  CHECK(h1.dim_cohomology == 2);
  const auto a0 = standard_cocycle(StandardName::alpha, Rational(0), 6, 0);
  const auto a1 = standard_cocycle(StandardName::alpha, Rational(0), 6, 1);
  CHECK(in_span_mod_coboundaries(Rational(0), a0, h1.representatives, 6));
  CHECK(in_span_mod_coboundaries(Rational(0), a1, h1.representatives, 6));
  for (const auto& rep : h1.representatives) CHECK(in_span_mod_coboundaries(Rational(0), rep, {a0, a1}, 6));

  CHECK_THROWS_AS(homogeneous_cohomology(Rational(1), 2, 10, 1), lwb::Error);
  CHECK_THROWS_AS(homogeneous_cohomology(Rational(1), 2, 10, 9), lwb::Error);
  CHECK_FALSE(homogeneous_cohomology(Rational(1), 2, 6, 3).stabilized);  // no (N-2, M-2) run
}

TEST_CASE("property: internal-degree concentration") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> deg(1, 6), lam(0, 3);
  std::bernoulli_distribution neg(0.5);
  for (int k = 0; k < 10; ++k) {
    const long d = neg(rng) ? -deg(rng) : deg(rng);
    const Rational l(lam(rng));
    CHECK(homogeneous_cohomology(l, 1, 8, 4, d).dim_cohomology == 0);
    CHECK(homogeneous_cohomology(l, 2, 8, 4, d).dim_cohomology == 0);
  }
}

TEST_CASE("property: stabilized windows stay stable") {
  for (long l = 0; l <= 7; ++l) {
    const auto r = homogeneous_cohomology(Rational(l), 2, 10, 6);
    if (!r.stabilized) continue;
    CHECK(homogeneous_cohomology(Rational(l), 2, 12, 8).dim_cohomology == r.dim_cohomology);
  }
}

TEST_CASE("sl2 slice cohomology") {
  const std::vector<std::size_t> h2 = {1, 2, 0, 0}, h1 = {2, 1, 0, 0};
  for (long l = 0; l <= 3; ++l) {
    CHECK(sl2_slice_cohomology(Rational(l), 2).dim_cohomology == h2[static_cast<std::size_t>(l)]);
    CHECK(sl2_slice_cohomology(Rational(l), 1).dim_cohomology == h1[static_cast<std::size_t>(l)]);
  }
}

TEST_CASE("exact finite slices agree with the Chevalley-Eilenberg engine") {
  // F_{-M} truncated to |m| <= M is an honest sl2 module, and internal-degree-0
  // values f_{a_1+..+a_p} with a_i in {-1,0,1} stay inside that window.
  const auto g = lwb::lie::sl2_witt();
  for (long m : {1, 2}) {
    const auto slice = restrict_to_finite_slice(Rational(-m), m);
    REQUIRE(slice.exact());
    const auto mod = slice.to_module(g);
    for (std::size_t p = 0; p <= 3; ++p)
      CHECK(lwb::ce::cohomology(g, mod, p).dim_cohomology == sl2_slice_cohomology(Rational(-m), p).dim_cohomology);
  }
}

TEST_CASE("finite slice structure") {
  const auto s = restrict_to_finite_slice(Rational(1), 3);
  for (long m = -3; m <= 3; ++m) CHECK(s.action[1].at(static_cast<std::size_t>(m + 3), static_cast<std::size_t>(m + 3)) == m);
  bool top_leak = false;
  for (const auto& l : s.leakage)
    if (l.generator == 1 && l.source == 3 && l.target == 4) top_leak = true;
  CHECK(top_leak);
  CHECK_THROWS_AS(s.to_module(lwb::lie::sl2_witt()), lwb::Error);

  const auto z = restrict_to_finite_slice(Rational(0), 3);
  for (const auto& a : z.full_action)
    for (std::size_t r = 0; r < a.rows(); ++r) CHECK(a.at(r, 3) == 0);  // f_0 annihilated
  const auto inv = z.invariants();
  CHECK(inv.dim() == 1);
  CHECK(inv.contains(Vector{0, 0, 0, 1, 0, 0, 0}));
}

TEST_CASE("insertion agrees with the Chevalley-Eilenberg insertion on the sl2 slice") {
  // omega_1 restricted to span{l_-1, l_0, l_1} as an ordinary cochain with values
  // in span{f_-2..f_2}
  const auto w = standard_cocycle(StandardName::omega, Rational(1), 2);
  const std::vector<long> gen = {-1, 0, 1};
  lwb::ce::Cochain c(2, 3, 5);
  for (const auto& t : lwb::ce::increasing_tuples(3, 2)) {
    Vector v = lwb::exact::zero_vector(5);
    v[static_cast<std::size_t>(gen[t[0]] + gen[t[1]] + 2)] = w.coeff({gen[t[0]], gen[t[1]]});
    c.set(t, v);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    Vector x = lwb::exact::zero_vector(3);
    x[k] = 1;
    const auto ci = lwb::ce::insertion(x, c);
    const auto gi = graded_insertion(gen[k], w);
    for (std::size_t j = 0; j < 3; ++j) {
      const long a = gen[j];
      Vector expect = lwb::exact::zero_vector(5);
      expect[static_cast<std::size_t>(a + gi.internal_degree() + 2)] = gi.coeff({a});
      CHECK(ci.value({j}) == expect);
    }
  }
}

TEST_CASE("json report") {
  const auto r = homogeneous_cohomology(Rational(1), 2, 8, 4);
  const auto j = to_json(r);
  CHECK(j["lambda"] == "1");
  CHECK(j["p"] == 2);
  CHECK(j["window"][0] == 8);
  CHECK(j["window"][1] == 4);
  CHECK(j["dimH"] == 2);
  CHECK(j["representatives"].size() == 2);
  CHECK(graded_cochain_from_json(to_json(r.representatives[0])) == r.representatives[0]);
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lwb/simd/kernels.hpp"

using namespace lwb::simd;

namespace {

std::vector<double> random_array(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("dispatch honours the scalar override") {
  force_scalar(true);
  CHECK(std::string(kernels().name) == "scalar");
  force_scalar(false);
  if (avx2_kernels()) CHECK(std::string(kernels().name) == "avx2");
  else MESSAGE("AVX2 not available; only the scalar path is exercised");
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const Kernels* v = avx2_kernels();
  if (!v) return;
  const Kernels& s = scalar_kernels();
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    CAPTURE(n);
    const auto a = random_array(rng, n), b = random_array(rng, n), c = random_array(rng, n);
    std::vector<double> o1(n), o2(n);
    s.mul(a.data(), b.data(), o1.data(), n);
    v->mul(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
    s.fma(a.data(), b.data(), c.data(), o1.data(), n);
    v->fma(a.data(), b.data(), c.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(o2[i], o1[i]) < 1e-15);
    CHECK(rel_diff(v->sum(a.data(), n), s.sum(a.data(), n)) < 1e-13);
    CHECK(rel_diff(v->dot(a.data(), b.data(), n), s.dot(a.data(), b.data(), n)) < 1e-13);
  }
  for (std::size_t h : {1u, 8u, 33u, 128u}) {
    for (std::size_t n : {1u, 4u, 6u, 200u}) {
      const auto ca = random_array(rng, h), sb = random_array(rng, h), x = random_array(rng, n);
      std::vector<double> o1(n), o2(n);
      s.trig_series(0.25, ca.data(), sb.data(), h, x.data(), o1.data(), n);
      v->trig_series(0.25, ca.data(), sb.data(), h, x.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(o2[i], o1[i]) < 1e-12);
    }
  }
}

TEST_CASE("trig series matches direct cos/sin evaluation") {
  std::mt19937_64 rng(3);
  const std::size_t h = 100;
  const auto ca = random_array(rng, h), sb = random_array(rng, h), x = random_array(rng, 50);
  std::vector<double> out(x.size());
  kernels().trig_series(-0.5, ca.data(), sb.data(), h, x.data(), out.data(), x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double ref = -0.5;
    for (std::size_t k = 1; k <= h; ++k)
      ref += ca[k - 1] * std::cos(2 * M_PI * double(k) * x[j]) - sb[k - 1] * std::sin(2 * M_PI * double(k) * x[j]);
    CHECK(rel_diff(out[j], ref) < 1e-11);
  }
}

#include "lwb/simd/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string_view>

namespace lwb::simd {

namespace {

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void fma_scalar(const double* a, const double* b, const double* c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void trig_series_scalar(double a0, const double* ca, const double* sb, std::size_t h, const double* x, double* out,
                        std::size_t n) {
  const double two_pi = 2 * std::numbers::pi;
  for (std::size_t j = 0; j < n; ++j) {
    // (c, s) = (cos, sin)(2 pi k x) by rotation; reseeded every 32 steps to bound drift.
    const double c1 = std::cos(two_pi * x[j]), s1 = std::sin(two_pi * x[j]);
    double c = c1, s = s1, acc = a0;
    for (std::size_t k = 1; k <= h; ++k) {
      acc += ca[k - 1] * c - sb[k - 1] * s;
      if (k % 32 == 0) {
        c = std::cos(two_pi * double(k + 1) * x[j]);
        s = std::sin(two_pi * double(k + 1) * x[j]);
      } else {
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
      }
    }
    out[j] = acc;
  }
}

const Kernels kScalar{"scalar", mul_scalar, fma_scalar, sum_scalar, dot_scalar, trig_series_scalar};

#if defined(LWB_HAVE_AVX2)
bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

std::atomic<int> g_force{-1};  // -1 unread, 0 off, 1 on

bool forced() {
  int f = g_force.load(std::memory_order_relaxed);
  if (f < 0) {
    const char* env = std::getenv("LWB_FORCE_SCALAR");
    f = (env && std::string_view(env) != "0" && std::string_view(env) != "") ? 1 : 0;
    int expected = -1;
    g_force.compare_exchange_strong(expected, f);
    f = g_force.load();
  }
  return f == 1;
}

}  // namespace

#if defined(LWB_HAVE_AVX2)
const Kernels& avx2_table();  // kernels_avx2.cpp
#endif

const Kernels& scalar_kernels() { return kScalar; }

const Kernels* avx2_kernels() {
#if defined(LWB_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& kernels() {
  if (forced()) return kScalar;
  const Kernels* v = avx2_kernels();
  return v ? *v : kScalar;
}

void force_scalar(bool on) { g_force.store(on ? 1 : 0); }

}  // namespace lwb::simd

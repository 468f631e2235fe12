#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "lwb/simd/kernels.hpp"

namespace lwb::simd {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void fma_avx2(const double* a, const double* b, const double* c, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), _mm256_loadu_pd(c + i)));
  for (; i < n; ++i) out[i] = std::fma(a[i], b[i], c[i]);
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_add_pd(s0, _mm256_loadu_pd(a + i));
    s1 = _mm256_add_pd(s1, _mm256_loadu_pd(a + i + 4));
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_add_pd(s0, _mm256_loadu_pd(a + i));
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i];
  return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Four points per lane group; same rotation/reseed schedule as the scalar path.
void trig_series_avx2(double a0, const double* ca, const double* sb, std::size_t h, const double* x, double* out,
                      std::size_t n) {
  const double two_pi = 2 * std::numbers::pi;
  std::size_t j = 0;
  alignas(32) double c1a[4], s1a[4], ca4[4], sa4[4];
  for (; j + 4 <= n; j += 4) {
    for (int l = 0; l < 4; ++l) {
      c1a[l] = std::cos(two_pi * x[j + l]);
      s1a[l] = std::sin(two_pi * x[j + l]);
    }
    const __m256d c1 = _mm256_load_pd(c1a), s1 = _mm256_load_pd(s1a);
    __m256d c = c1, s = s1, acc = _mm256_set1_pd(a0);
    for (std::size_t k = 1; k <= h; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(ca[k - 1]), c, acc);
      acc = _mm256_fnmadd_pd(_mm256_set1_pd(sb[k - 1]), s, acc);
      if (k % 32 == 0) {
        for (int l = 0; l < 4; ++l) {
          ca4[l] = std::cos(two_pi * double(k + 1) * x[j + l]);
          sa4[l] = std::sin(two_pi * double(k + 1) * x[j + l]);
        }
        c = _mm256_load_pd(ca4);
        s = _mm256_load_pd(sa4);
      } else {
        const __m256d cn = _mm256_fmsub_pd(c, c1, _mm256_mul_pd(s, s1));
        s = _mm256_fmadd_pd(s, c1, _mm256_mul_pd(c, s1));
        c = cn;
      }
    }
    _mm256_storeu_pd(out + j, acc);
  }
  if (j < n) scalar_kernels().trig_series(a0, ca, sb, h, x + j, out + j, n - j);
}

const Kernels kAvx2{"avx2", mul_avx2, fma_avx2, sum_avx2, dot_avx2, trig_series_avx2};

}  // namespace

const Kernels& avx2_table() { return kAvx2; }

}  // namespace lwb::simd

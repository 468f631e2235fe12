#pragma once

#include <cstddef>

namespace lwb::simd {

/// Grid kernels with a scalar reference and an AVX2/FMA variant chosen at
/// runtime. Reductions sum in a different order per variant, so results agree
/// to rounding, not bitwise.
struct Kernels {
  const char* name;
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  /// out = a * b + c
  void (*fma)(const double* a, const double* b, const double* c, double* out, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// out[j] = a0 + sum_{k=1}^{h} (ca[k-1] cos(2 pi k x_j) - sb[k-1] sin(2 pi k x_j))
  void (*trig_series)(double a0, const double* ca, const double* sb, std::size_t h, const double* x, double* out,
                      std::size_t n);
};

const Kernels& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();

/// The dispatched table: AVX2 when available unless forced scalar (also via
/// LWB_FORCE_SCALAR=1 in the environment, read once).
const Kernels& kernels();
void force_scalar(bool on);

}  // namespace lwb::simd

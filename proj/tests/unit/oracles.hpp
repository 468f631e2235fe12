#pragma once

// Independent reference computations used as test oracles. These deliberately
// avoid the library's elimination code.

#include <random>
#include <vector>

#include "lwb/exact/rational.hpp"

namespace oracle {

using lwb::exact::Rational;
using lwb::exact::Vector;

// Dense column-major Gaussian elimination: sweeps columns right to left and
// pivots on the last nonzero row, so its elimination order differs from the
// library's fill-driven choice.
inline std::size_t dense_rank(std::vector<Vector> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::vector<bool> used(rows, false);
  std::size_t rank = 0;
  for (std::size_t cc = cols; cc-- > 0;) {
    std::size_t piv = rows;
    for (std::size_t r = rows; r-- > 0;)
      if (!used[r] && a[r][cc] != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    used[piv] = true;
    ++rank;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == piv || a[r][cc] == 0) continue;
      const Rational f = a[r][cc] / a[piv][cc];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] -= f * a[piv][c];
    }
  }
  return rank;
}

inline Rational random_rational(std::mt19937_64& rng, int range = 5, int den = 4) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> d(1, den);
  return lwb::exact::make_rational(num(rng), d(rng));
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double density = 0.7) {
  std::bernoulli_distribution keep(density);
  Vector v(n);
  for (auto& x : v) x = keep(rng) ? random_rational(rng) : Rational(0);
  return v;
}

}  // namespace oracle

#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "lwb/exact/linalg.hpp"
#include "lwb/lie/lie_algebra.hpp"

namespace lwb::witt {

using exact::Rational;
using exact::SparseMatrix;
using exact::Vector;

/// Increasing tuple of Witt generator indices a_1 < ... < a_p.
using Index = std::vector<long>;

/// Witt algebra acting on a density module F_lambda in the normalized basis:
///   [l_a, l_b] = (b - a) l_{a+b},   l_a . f_m = (m + lambda a) f_{m+a}.
/// l_a stands for exp(2 pi i a t) d/dt divided by 2 pi i, so the derivative acts on
/// f_m = exp(2 pi i m t) as multiplication by m. An analytic jet xi^(k) of a mode
/// therefore carries an extra (2 pi i)^k relative to these coefficients.
struct WittSpec {
  Rational lambda;

  static constexpr const char* kNormalization =
      "l_a = exp(2*pi*i*a*t)/(2*pi*i) d/dt, f_m = exp(2*pi*i*m*t); "
      "k-th derivative of a mode f_a contributes a^k here and (2*pi*i*a)^k analytically";

  Rational bracket_coeff(long a, long b) const { return Rational(b - a); }
  Rational action_coeff(long a, long m) const { return Rational(m) + lambda * a; }

  /// Checks [l_a,l_b].f_m = l_a.l_b.f_m - l_b.l_a.f_m on `count` random triples
  /// with indices in [-range, range]; returns the number of failures.
  std::size_t spot_check(std::mt19937_64& rng, std::size_t count, long range = 20) const;
};

/// p-cochain of internal degree d: value on (l_{a_1},..,l_{a_p}) is
/// coeff(a) f_{a_1+..+a_p+d}. Coefficients are stored for increasing tuples with
/// all |a_i| <= window.
class GradedCochain {
public:
  GradedCochain(std::size_t degree, long internal_degree, long window);

  std::size_t degree() const noexcept { return degree_; }
  long internal_degree() const noexcept { return internal_degree_; }
  long window() const noexcept { return window_; }

  /// Coefficient on indices in any order (sign of the sorting permutation applied).
  Rational coeff(Index a) const;
  void set(Index a, const Rational& c);
  bool in_window(const Index& a) const;

  const std::map<Index, Rational>& coefficients() const noexcept { return coeffs_; }

  /// Copy truncated to a smaller window.
  GradedCochain restricted(long window) const;

  GradedCochain operator+(const GradedCochain& o) const;
  GradedCochain operator-(const GradedCochain& o) const;
  GradedCochain scaled(const Rational& s) const;
  bool operator==(const GradedCochain& o) const;
  bool is_zero() const { return coeffs_.empty(); }

private:
  std::size_t degree_;
  long internal_degree_;
  long window_;
  std::map<Index, Rational> coeffs_;
};

/// All increasing p-tuples with entries in [-window, window].
std::vector<Index> window_tuples(long window, std::size_t p);

enum class StandardName { alpha, omega, omega_bar };

/// The named cocycles in the normalized basis:
///   alpha_n          a^n                   (n,lambda) in {(0,0),(1,any),(2,1),(3,2)}
///   omega_bar_lambda b^{l+1} - a^{l+1}     lambda in {0,1,2}
///   omega_lambda     a b^{l+1} - b a^{l+1} lambda in {1,2}; ab(b-a)[a+b=0] at lambda 0
/// Throws "unsupported_cocycle" outside these combinations. `n` is used by alpha only.
GradedCochain standard_cocycle(StandardName name, const Rational& lambda, long window, unsigned n = 0);
/// Parses "alpha_2", "omega_1", "omega_bar_0".
GradedCochain standard_cocycle(const std::string& name, const Rational& lambda, long window);

/// d of a degree-p cochain with values in F_lambda, on every (p+1)-tuple in the
/// window whose terms only reference coefficients inside the window.
GradedCochain graded_differential(const Rational& lambda, const GradedCochain& w);

/// Product for F_mu x F_nu -> F_{mu+nu}, f_a . f_b = f_{a+b}; windows must agree.
GradedCochain graded_wedge(const GradedCochain& a, const GradedCochain& b);

/// i_{l_c} w; the internal degree grows by c. Throws "degree_zero_insertion" for p = 0.
GradedCochain graded_insertion(long c, const GradedCochain& w);

struct WindowCohomology {
  Rational lambda;
  std::size_t degree = 0;
  long internal_degree = 0;
  long outer_window = 0;
  long inner_window = 0;
  std::size_t dim_cocycles = 0;
  std::size_t dim_coboundaries = 0;
  std::size_t dim_cohomology = 0;
  std::vector<GradedCochain> representatives;
  bool stabilized = false;
  std::size_t previous_dim_cohomology = 0;  // run at (N-2, M-2)
  std::string scalar_field = "Q (complexified Fourier modes)";
};

/// Homogeneous cohomology in a window:
///   constraints  cocycle equations on all (p+1)-tuples in [-N, N]
///   unknowns     every coefficient those equations reference (bracket slots reach 2N)
///   Z            restriction of the solution space to tuples in [-M, M]
///   B            restriction of d of arbitrary (p-1)-cochains to tuples in [-M, M]
/// stabilized compares dim H with the run at (N-2, M-2).
/// Throws "window_too_small" unless p <= M <= N - p (and M - 2 >= p for the
/// stabilization run, which is skipped, reported as not stabilized, otherwise).
WindowCohomology homogeneous_cohomology(const Rational& lambda, std::size_t p, long outer, long inner,
                                        long internal_degree = 0);

/// True iff the coefficient vector of `w` (restricted to inner window M) lies in
/// span(basis) + B_M for lambda, p = w.degree().
bool in_span_mod_coboundaries(const Rational& lambda, const GradedCochain& w, const std::vector<GradedCochain>& basis,
                              long inner);

struct CupIdentityReport {
  Rational lambda;
  long window = 0;
  std::size_t pairs_checked = 0;
  bool omega_bar_identity = false;  // omega_bar_l = alpha_0 ^ alpha_{l+1}
  bool omega_identity = false;      // omega_l = alpha_1 ^ alpha_{l+1}
  bool holds() const { return omega_bar_identity && omega_identity; }
};

/// lambda must be 1 or 2 ("unsupported_cocycle" otherwise).
CupIdentityReport cup_identity_check(const Rational& lambda, long window = 12);

struct SliceCohomology {
  Rational lambda;
  std::size_t degree = 0;
  std::size_t dim_cocycles = 0;
  std::size_t dim_coboundaries = 0;
  std::size_t dim_cohomology = 0;
  std::vector<GradedCochain> representatives;
};

/// Cohomology of span{l_-1, l_0, l_1} with values in F_lambda, internal degree 0.
/// The index set {-1, 0, 1} is closed under brackets of distinct elements, so this
/// is exact. p in {0, 1, 2, 3}.
SliceCohomology sl2_slice_cohomology(const Rational& lambda, std::size_t p);

/// Action of l_-1, l_0, l_1 on span{f_m : |m| <= M}.
struct FiniteSlice {
  Rational lambda;
  long window = 0;
  std::vector<SparseMatrix> action;      // (2M+1) x (2M+1), basis f_{-M}..f_M
  std::vector<SparseMatrix> full_action; // (2M+3) x (2M+1), targets f_{-M-1}..f_{M+1}
  struct Leak {
    long generator;  // a in {-1, 0, 1}
    long source;     // m
    long target;     // m + a, outside the window
    Rational coeff;
  };
  std::vector<Leak> leakage;

  bool exact() const { return leakage.empty(); }
  /// Module over lie::sl2_witt(); throws "truncation_leak" if any image leaves the window.
  lie::LieModule to_module(const lie::LieAlgebra& sl2) const;
  /// {v in the window : l_a . v = 0 for a = -1, 0, 1}, leaked images included.
  exact::Subspace invariants() const;
};

FiniteSlice restrict_to_finite_slice(const Rational& lambda, long window);

nlohmann::json to_json(const GradedCochain& w);
GradedCochain graded_cochain_from_json(const nlohmann::json& j);
/// {"lambda": "1", "p": 2, "window": [N, M], "dimH": .., "stabilized": .., "representatives": [...]}
nlohmann::json to_json(const WindowCohomology& r);

}  // namespace lwb::witt

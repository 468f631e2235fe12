#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lwb::circle {

/// 1-periodic real function sampled at j/K, j = 0..K-1, read as its
/// trigonometric interpolant. K is a power of two, at least 16.
class PeriodicFunction {
public:
  PeriodicFunction() = default;
  /// Throws "invalid_grid" or "non_finite".
  explicit PeriodicFunction(std::vector<double> samples);
  static PeriodicFunction from_function(std::size_t grid, const std::function<double(double)>& f);
  static PeriodicFunction constant(std::size_t grid, double c);

  std::size_t grid() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }

  /// c_k for k = 0..K/2, normalized so f(x) = sum_k c_k exp(2 pi i k x) over k in (-K/2, K/2].
  std::vector<std::complex<double>> coefficients() const;
  /// Spectral n-th derivative; the Nyquist mode is dropped for odd n. Throws for n = 0.
  PeriodicFunction derivative(unsigned n = 1) const;
  /// Interpolant at arbitrary (not necessarily grid) points.
  std::vector<double> evaluate(const std::vector<double>& x) const;
  double operator()(double x) const;

  /// Integral over one period (trapezoid rule, spectrally accurate here).
  double integral() const;
  double max_abs() const;
  /// max |c_k| over the top quarter of the band, relative to max(1, max |c_k|).
  double top_mode_ratio() const;
  /// Same function on a K' >= K grid via zero padding.
  PeriodicFunction resampled(std::size_t grid) const;

  PeriodicFunction operator+(const PeriodicFunction& o) const;
  PeriodicFunction operator-(const PeriodicFunction& o) const;
  PeriodicFunction operator*(const PeriodicFunction& o) const;
  PeriodicFunction scaled(double s) const;
  PeriodicFunction map(const std::function<double(double)>& f) const;

private:
  std::vector<double> samples_;
};

double max_abs_difference(const PeriodicFunction& a, const PeriodicFunction& b);

/// phi(x) = x + xi(x) on the universal cover; phi' = 1 + xi' must stay positive.
class CircleDiffeo {
public:
  /// Throws "not_orientation_preserving" if 1 + xi' <= 0 at a sample.
  explicit CircleDiffeo(PeriodicFunction displacement);
  static CircleDiffeo identity(std::size_t grid);
  /// x -> x + t
  static CircleDiffeo rotation(std::size_t grid, double t);

  std::size_t grid() const noexcept { return xi_.grid(); }
  const PeriodicFunction& displacement() const noexcept { return xi_; }
  /// phi' sampled on the grid.
  PeriodicFunction derivative() const;
  /// phi at arbitrary points.
  std::vector<double> apply(const std::vector<double>& x) const;
  /// phi at the grid points.
  std::vector<double> nodes() const;

private:
  PeriodicFunction xi_;
};

/// Relative level above which the top Fourier band of a composed displacement
/// counts as under-resolved.
inline constexpr double kResolutionTolerance = 1e-8;

/// (phi o psi)(x) = phi(psi(x)). Throws "under_resolved".
CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi);
/// Group product in Diff(S^1)^op: g.h = h o g.
CircleDiffeo product(const CircleDiffeo& g, const CircleDiffeo& h);
/// Per-sample Newton with bisection fallback on phi(y) = x, tolerance 1e-12.
CircleDiffeo invert(const CircleDiffeo& phi);

/// rho_lambda(phi) f = (phi')^lambda (f o phi), power via exp(lambda log phi').
PeriodicFunction density_action(double lambda, const CircleDiffeo& phi, const PeriodicFunction& f);
/// f o phi
PeriodicFunction pull_back(const CircleDiffeo& phi, const PeriodicFunction& f);

/// Normalized p-cochain on Diff(S^1)^op with values in F_lambda. Real-valued
/// cochains (scalar = true) return constant functions.
struct DiffeoCochain {
  std::string name;
  std::size_t degree = 0;
  double lambda = 0;
  bool scalar = false;
  std::function<PeriodicFunction(const std::vector<CircleDiffeo>&)> eval;

  PeriodicFunction operator()(const std::vector<CircleDiffeo>& args) const;
};

/// theta = log phi'            (F_0)
/// dtheta = phi''/phi'         (F_1)
/// schwarzian                  (F_2)
/// L = phi - id                (F_0, on the universal cover)
/// bott: B_0(phi, psi) = -int log((psi o phi)') d(log phi')   (real)
/// Throws "unknown_cochain".
DiffeoCochain named_cochain(const std::string& name);

/// (a u b)(g_1..g_{p+q}) = a(g_1..g_p) . rho(g_1...g_p) b(g_{p+1}..g_{p+q}) for the
/// pointwise pairing F_mu x F_nu -> F_{mu+nu}.
DiffeoCochain group_cup(const DiffeoCochain& a, const DiffeoCochain& b);
/// d_G with the rho_lambda action and the opposite product.
DiffeoCochain group_differential(const DiffeoCochain& f);

struct DeriveOptions {
  double eps = 1e-3;
  bool richardson = true;
};

/// D_n f(x_1..x_n) = sum_sigma sgn(sigma) d^n f(1..1)(x_sigma(1), ..), each
/// partial a central difference along t -> id + t x_i. n in {1, 2}.
/// Throws "step_too_large" when id + eps x_i is not a diffeo, "invalid_argument"
/// for eps outside (0, 0.1).
PeriodicFunction derive(const DiffeoCochain& f, const std::vector<PeriodicFunction>& directions,
                        const DeriveOptions& opt = {});

/// Five fixed trigonometric directions (modes 0..4) used by the derivation checks.
std::vector<PeriodicFunction> standard_directions(std::size_t grid);

/// Lie cocycle that D_n of a named group cochain should reproduce:
/// theta -> alpha_1, dtheta -> alpha_2, schwarzian -> alpha_3, L -> alpha_0,
/// bott -> omega_0, theta.dtheta -> omega_1, theta.schwarzian -> omega_2, L.theta ->
/// omega_bar_0, L.dtheta -> omega_bar_1, L.schwarzian -> omega_bar_2 ("a.b" is the
/// cup product a u b). Throws "unknown_cochain".
std::string derivation_target(const std::string& cochain);
/// named_cochain plus the cup products "a.b" of named cochains.
DiffeoCochain cochain_by_name(const std::string& name);

/// Lie cocycles of the vector field algebra in the analytic basis:
///   alpha_n(x) = x^(n)
///   omega_l(x, y) = x' y^(l+1) - y' x^(l+1)          (l >= 1)
///   omega_0(x, y) = int (x' y'' - x'' y')            (constant function)
///   omega_bar_l(x, y) = x y^(l+1) - y x^(l+1)
/// Throws "unknown_cocycle".
PeriodicFunction evaluate_lie_cocycle(const std::string& name, const std::vector<PeriodicFunction>& args);
/// Density weight of a named Lie cocycle's values (omega_0: 0).
double lie_cocycle_weight(const std::string& name);
std::size_t lie_cocycle_degree(const std::string& name);

/// x.f = x f' + lambda x' f
PeriodicFunction lie_action(double lambda, const PeriodicFunction& x, const PeriodicFunction& f);
/// [x, y] = x y' - x' y
PeriodicFunction vector_field_bracket(const PeriodicFunction& x, const PeriodicFunction& y);
/// (d h)(x, y) = x.h(y) - y.h(x) - h([x, y]) for a 1-cochain h with values in F_lambda.
PeriodicFunction lie_differential_1(double lambda, const std::function<PeriodicFunction(const PeriodicFunction&)>& h,
                                    const PeriodicFunction& x, const PeriodicFunction& y);

/// {"grid": K, "samples": [...]}
nlohmann::json to_json(const PeriodicFunction& f);
PeriodicFunction periodic_from_json(const nlohmann::json& j);

}  // namespace lwb::circle

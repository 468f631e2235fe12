#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lwb/circle/diff_circle.hpp"
#include "lwb/exact/rational.hpp"

namespace lwb::flux {

using Point = std::vector<double>;
using circle::CircleDiffeo;
using circle::PeriodicFunction;

// ---------------------------------------------------------------------------
// Surfaces in R^n

/// omega_p(u, v), values in R^m.
using FormField = std::function<std::vector<double>(const Point& p, const Point& u, const Point& v)>;

/// omega(u, v)_k = u^T W_k v at every point.
FormField constant_form(std::vector<Eigen::MatrixXd> components);

enum class Domain { square, triangle };

/// (t, s) -> point of R^n (a lift when the target is a torus). The triangle is
/// {t, s >= 0, t + s <= 1}.
struct SurfaceMap {
  Domain domain = Domain::square;
  std::function<Point(double t, double s)> eval;
  /// Gauss points per axis for the first pass, at least 8.
  std::size_t resolution = 16;
};

struct QuadratureOptions {
  /// Two successive resolutions must agree to tol * max(1, |value|).
  double tol = 1e-10;
  std::size_t max_resolution = 512;
};

struct SurfaceIntegral {
  std::vector<double> value;
  std::size_t resolution = 0;  // accepted per-axis resolution
  double refinement_change = 0;
};

/// int_{domain} H^* omega with tensor Gauss-Legendre (Duffy-collapsed on the
/// triangle) and fourth-order differences for the tangents. Resolution is
/// doubled until two passes agree. Throws "resolution_insufficient" or
/// "invalid_argument" (resolution < 8).
SurfaceIntegral surface_integral(const SurfaceMap& h, const FormField& omega, const QuadratureOptions& opt = {});
/// Sum over the patches of an atlas.
SurfaceIntegral surface_integral(const std::vector<SurfaceMap>& atlas, const FormField& omega,
                                 const QuadratureOptions& opt = {});

// ---------------------------------------------------------------------------
// Lattices

/// Discrete subgroup of R^n spanned by independent generators. Exact lattices
/// keep rational coordinates next to their float images.
class Lattice {
public:
  /// Throws "not_independent" or "dimension_mismatch".
  static Lattice exact(std::vector<exact::Vector> generators);
  static Lattice approximate(std::vector<std::vector<double>> generators);
  static Lattice integers(std::size_t n);
  /// {0} in R^n, the period lattice of a connected (vector space) A.
  static Lattice zero(std::size_t n);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return gens_.size(); }
  bool is_exact() const noexcept { return exact_gens_.has_value(); }
  const std::vector<std::vector<double>>& generators() const noexcept { return gens_; }
  const std::vector<exact::Vector>& exact_generators() const;

  /// Integer coordinates of v, if v lies in the lattice. Needs an exact lattice.
  std::optional<std::vector<exact::Integer>> coordinates(const exact::Vector& v) const;
  bool contains(const exact::Vector& v) const { return coordinates(v).has_value(); }
  /// Least-squares coordinates; v is a member if the residual and the
  /// distance of every coordinate to an integer are at most tol.
  bool contains(const std::vector<double>& v, double tol = 1e-9) const;
  std::vector<double> float_coordinates(const std::vector<double>& v) const;

private:
  Lattice() = default;
  std::size_t ambient_ = 0;
  std::vector<std::vector<double>> gens_;
  std::optional<std::vector<exact::Vector>> exact_gens_;
};

using RationalMatrix = std::vector<exact::Vector>;  // row-major, square

struct CommutatorPairing {
  /// values[i][j] = omega(g_i, g_j) from the surface quadrature.
  std::vector<std::vector<std::vector<double>>> values;
  /// Exact pairings when omega and the generators are rational.
  std::optional<std::vector<std::vector<exact::Vector>>> exact_values;
  double max_quadrature_error = 0;  // against the exact values, if any
  bool contained = false;
  bool exact_verdict = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// omega(Gamma_T, Gamma_T) in Gamma_Z? omega has m alternating n x n
/// components. Throws "not_alternating" or "dimension_mismatch".
CommutatorPairing torus_commutator_pairing(const std::vector<RationalMatrix>& omega, const Lattice& gamma_t,
                                           const Lattice& gamma_z, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Loops in Diff(S^1)^op

/// Nodes gamma(j / M), j = 0..M, with M a power of two >= 64. Break indices
/// split the parameter interval into smooth pieces (used by concatenation).
class LoopInGroup {
public:
  /// Throws "invalid_grid" (node count, mixed spatial grids, breaks) or
  /// "resolution_insufficient" (adjacent displacements differ by more than 1/4).
  explicit LoopInGroup(std::vector<CircleDiffeo> nodes, std::vector<std::size_t> breaks = {});
  static LoopInGroup from_function(std::size_t intervals, const std::function<CircleDiffeo(double)>& f);
  /// t -> R_t, one full turn.
  static LoopInGroup rotation(std::size_t grid, std::size_t intervals = 64);
  static LoopInGroup constant(const CircleDiffeo& g, std::size_t intervals = 64);

  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  const std::vector<CircleDiffeo>& nodes() const noexcept { return nodes_; }
  const std::vector<std::size_t>& breaks() const noexcept { return breaks_; }
  /// gamma(1) = gamma(0) in Diff(S^1): the displacements differ by an integer.
  bool closed(double tol = 1e-10) const;
  /// Number of turns gamma(1) - gamma(0) for a closed loop.
  long winding() const;

  /// t -> gamma(1 - t)
  LoopInGroup reversed() const;

private:
  std::vector<CircleDiffeo> nodes_;
  std::vector<std::size_t> breaks_;
};

/// gamma_1 # gamma_2: gamma_1(2t), then gamma_1(1) gamma_2(0)^{-1} gamma_2(2t - 1).
/// Both loops need the same number of intervals.
LoopInGroup concatenate(const LoopInGroup& a, const LoopInGroup& b);

/// Lie 2-cocycle of vector fields with values in F_lambda (scalar ones return
/// constants and carry lambda = 0).
struct LieTwoCocycle {
  std::string name;
  double lambda = 0;
  std::function<PeriodicFunction(const PeriodicFunction&, const PeriodicFunction&)> eval;
};
/// omega_l, omega_0, omega_bar_l by name. Throws "unknown_cocycle".
LieTwoCocycle lie_two_cocycle(const std::string& name);

struct LieOneCocycle {
  std::string name;
  double lambda = 0;
  std::function<PeriodicFunction(const PeriodicFunction&)> eval;
};
/// alpha_n by name. Throws "unknown_cocycle".
LieOneCocycle lie_one_cocycle(const std::string& name);

/// Ad(phi)^{-1} x = rho_{-1}(phi^{-1}) x
PeriodicFunction adjoint_inverse(const CircleDiffeo& phi, const PeriodicFunction& x);

struct LineOptions {
  /// Full and half node sets must agree to tol * max(1, |value|).
  double tol = 1e-8;
};

/// I_gamma(x) = int_0^1 gamma(t).omega(Ad(gamma(t))^{-1} x, delta^l(gamma)(t)) dt.
/// Closed single-piece loops use the periodic trapezoid rule with spectral
/// t-derivatives; otherwise sixth-order differences and Boole's rule per piece.
/// Throws "resolution_insufficient".
PeriodicFunction flux_line_integral(const LieTwoCocycle& omega, const LoopInGroup& gamma, const PeriodicFunction& x,
                                    const LineOptions& opt = {});
/// F~_omega(gamma)(x) = -I_gamma(x)
PeriodicFunction flux_value(const LieTwoCocycle& omega, const LoopInGroup& gamma, const PeriodicFunction& x,
                            const LineOptions& opt = {});

/// (g.phi)(x) = g.phi(Ad(g)^{-1} x) applied to phi = F~_omega(gamma).
PeriodicFunction translated_flux(const LieTwoCocycle& omega, const CircleDiffeo& g, const LoopInGroup& gamma,
                                 const PeriodicFunction& x, const LineOptions& opt = {});

struct FluxCocycleReport {
  PeriodicFunction concatenated;  // F~(gamma_1 # gamma_2)(x)
  PeriodicFunction sum;           // F~(gamma_1)(x) + gamma_1(1) gamma_2(0)^{-1}.F~(gamma_2)(x)
  double composition_error = 0;
  double inverse_error = 0;       // |F~(gamma_1^-)(x) + F~(gamma_1)(x)|
  bool holds(double tol) const { return composition_error <= tol && inverse_error <= tol; }
};
FluxCocycleReport flux_cocycle_property(const LieTwoCocycle& omega, const LoopInGroup& gamma1,
                                        const LoopInGroup& gamma2, const PeriodicFunction& x,
                                        const LineOptions& opt = {});

/// per_alpha(gamma) = int_0^1 gamma(t).alpha(delta^l(gamma)(t)) dt
PeriodicFunction loop_period_1cocycle(const LieOneCocycle& alpha, const LoopInGroup& gamma,
                                      const LineOptions& opt = {});

struct FluxClass {
  std::vector<std::string> basis;
  std::vector<double> coordinates;
  double relative_residual = 0;
};
/// Coordinates of [F~_omega(gamma)] on named representatives of H^1(g, F_lambda),
/// by least squares over probe directions, with the coboundaries of low Fourier
/// modes (up to `modes`) as nuisance columns.
FluxClass flux_class(const LieTwoCocycle& omega, const LoopInGroup& gamma, const std::vector<std::string>& h1_basis,
                     std::size_t modes = 3, const LineOptions& opt = {});

// ---------------------------------------------------------------------------
// Local group charts and the simplex 2-cocycle

struct GroupChart {
  std::string name;
  std::size_t dim = 0;
  std::function<Point(const Point&, const Point&)> mul;
  /// Max-norm radius of the region where the chart is valid.
  double radius = 0;
};
GroupChart abelian_chart(std::size_t n, double radius = 1e6);
/// Exponential coordinates on the Heisenberg group:
/// (a, b, c)(a', b', c') = (a + a', b + b', c + c' + (ab' - ba')/2).
GroupChart heisenberg_chart(double radius = 1e3);

/// f_V(x, y) = int over gamma_{x,y}(t, s) = t (x * s y) + s (x * (1 - t) y) of the
/// left-invariant extension of Omega. Throws "chart_region_exceeded".
double simplex_cocycle(const GroupChart& chart, const Eigen::MatrixXd& omega, const Point& x, const Point& y,
                       const QuadratureOptions& opt = {});
/// d^2 f(0,0)(x, y) - d^2 f(0,0)(y, x) with d^2 f(0,0)(x, y) = d/dt d/ds f(t x, s y) at 0,
/// by central differences.
double alternated_second_derivative(const std::function<double(const Point&, const Point&)>& f, const Point& x,
                                    const Point& y, double h = 1e-3);

// ---------------------------------------------------------------------------
// Integrability

enum class Verdict { integrable, obstructed_period, obstructed_flux };
std::string to_string(Verdict v);

struct IntegrabilityData {
  /// Generators of Pi_omega (need not be independent).
  std::vector<std::vector<double>> periods;
  std::optional<std::vector<exact::Vector>> exact_periods;
  /// Coordinates of flux classes in H^1; one entry per generator of pi_1(G).
  std::vector<std::vector<double>> flux_values;
  /// Spanning set of the admissible flux image; empty for connected A.
  std::vector<std::vector<double>> characteristic_image;
  double tol = 1e-9;
};

struct IntegrabilityVerdict {
  Verdict verdict = Verdict::integrable;
  nlohmann::json witness;
};

/// Period condition first (Pi_omega in Gamma_A, exact when both sides are
/// rational), then the flux condition (each flux value in the span of the
/// characteristic image, i.e. zero for connected A).
IntegrabilityVerdict integrability_decision(const IntegrabilityData& data, const Lattice& gamma_a);

nlohmann::json to_json(const IntegrabilityVerdict& v);

}  // namespace lwb::flux

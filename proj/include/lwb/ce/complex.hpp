#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lwb/exact/linalg.hpp"
#include "lwb/lie/lie_algebra.hpp"

namespace lwb::ce {

using exact::Rational;
using exact::Vector;
using lie::LieAlgebra;
using lie::LieModule;

using Tuple = std::vector<std::size_t>;

/// All strictly increasing p-tuples from {0..n-1}, lexicographic.
std::vector<Tuple> increasing_tuples(std::size_t n, std::size_t p);

/// Sorts `t` in place; returns the permutation sign, or 0 on a repeated index.
int canonicalize(Tuple& t);

/// Alternating p-cochain g^p -> V, stored on increasing tuples.
/// Degree 0 stores one module vector under the empty tuple.
class Cochain {
public:
  Cochain(std::size_t degree, std::size_t algebra_dim, std::size_t module_dim);

  std::size_t degree() const noexcept { return degree_; }
  std::size_t algebra_dim() const noexcept { return algebra_dim_; }
  std::size_t module_dim() const noexcept { return module_dim_; }

  /// Value on basis elements in any order; the permutation sign is applied here
  /// and nowhere else.
  Vector value(Tuple t) const;
  /// Value on arbitrary algebra elements (multilinear extension).
  Vector evaluate(const std::vector<Vector>& args) const;
  /// Stores the value for tuple `t` (any order; sign applied).
  void set(Tuple t, Vector v);

  const std::map<Tuple, Vector>& values() const noexcept { return values_; }

  /// Coordinates in the basis (increasing tuples lexicographic) x (module basis).
  Vector coordinates() const;
  static Cochain from_coordinates(std::size_t degree, std::size_t algebra_dim, std::size_t module_dim,
                                  const Vector& coords);

  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain scaled(const Rational& s) const;
  bool is_zero() const;
  bool operator==(const Cochain& o) const;

private:
  void check_compatible(const Cochain& o) const;

  std::size_t degree_;
  std::size_t algebra_dim_;
  std::size_t module_dim_;
  std::map<Tuple, Vector> values_;  // only nonzero values
};

/// Chevalley-Eilenberg differential (d f)(x_0..x_p) =
///   sum_j (-1)^j x_j.f(..x_j^..) + sum_{i<j} (-1)^{i+j} f([x_i,x_j], ..x_i^..x_j^..).
Cochain lie_differential(const LieAlgebra& g, const LieModule& v, const Cochain& f);

/// Matrix of d: C^p -> C^{p+1} in coordinates() order.
exact::SparseMatrix differential_matrix(const LieAlgebra& g, const LieModule& v, std::size_t p);

struct CohomologyResult {
  std::size_t degree = 0;
  std::size_t dim_cocycles = 0;
  std::size_t dim_coboundaries = 0;
  std::size_t dim_cohomology = 0;
  std::vector<Cochain> representatives;
  std::string scalar_field = "Q";
};

CohomologyResult cohomology(const LieAlgebra& g, const LieModule& v, std::size_t p);

/// Bilinear pairing U x V -> W; table[u * dimV + v] is the image of (e_u, e_v).
struct Pairing {
  std::size_t dim_u = 0;
  std::size_t dim_v = 0;
  std::size_t dim_w = 0;
  std::vector<Vector> table;

  Vector apply(const Vector& u, const Vector& v) const;
};

/// Throws "non_equivariant_pairing" with detail "(x,u,v)" on the first failing
/// basis triple of x.(u.v) = (x.u).v + u.(x.v).
void validate_pairing(const LieAlgebra& g, const LieModule& u, const LieModule& v, const LieModule& w,
                      const Pairing& m);

Pairing scalar_pairing(std::size_t dim);  // R x V -> V

/// (alpha ^ beta)(x_1..x_{p+q}) = 1/(p!q!) sum_sigma sgn(sigma) alpha(..) . beta(..),
/// evaluated as a sum over (p,q)-shuffles.
Cochain wedge(const LieAlgebra& g, const LieModule& u, const LieModule& v, const LieModule& w,
              const Cochain& alpha, const Cochain& beta, const Pairing& m);
/// Same product without the equivariance validation (for non-module targets).
Cochain wedge_unchecked(const Cochain& alpha, const Cochain& beta, const Pairing& m);

/// (i_x w)(x_2..x_p) = w(x, x_2..x_p). Throws "degree_zero_insertion" for p = 0.
Cochain insertion(const Vector& x, const Cochain& w);

/// {"degree": p, "values": {"i1,i2": ["p/q", ...]}}
nlohmann::json to_json(const Cochain& c);
Cochain cochain_from_json(const nlohmann::json& j, std::size_t algebra_dim, std::size_t module_dim);

}  // namespace lwb::ce

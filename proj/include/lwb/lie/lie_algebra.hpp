#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lwb/exact/linalg.hpp"

namespace lwb::lie {

using exact::Rational;
using exact::SparseMatrix;
using exact::SparseVector;
using exact::Subspace;
using exact::Vector;

/// Bracket data keyed by (i, j). Entries given only for one order are
/// completed by antisymmetry.
using BracketTable = std::map<std::pair<std::size_t, std::size_t>, SparseVector>;

/// Finite-dimensional Lie algebra over Q given by structure constants,
/// c[i][j] = coordinates of [e_i, e_j]. Only make_algebra builds one, so
/// antisymmetry and Jacobi always hold.
class LieAlgebra {
public:
  std::size_t dim() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Coordinates of [e_i, e_j] (dense, length dim).
  const Vector& bracket(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  Vector bracket(const Vector& x, const Vector& y) const;

  /// Matrix of ad(e_i) in the basis.
  SparseMatrix ad(std::size_t i) const;

  /// Free-form note on how generators were rescaled to keep the structure
  /// constants rational (e.g. "H = cos(2*pi*t)/pi").
  const std::map<std::string, std::string>& rescaling() const noexcept { return rescaling_; }
  void set_rescaling(std::string key, std::string note) { rescaling_[std::move(key)] = std::move(note); }

  const std::string& scalar_field() const noexcept { return scalar_field_; }

private:
  friend LieAlgebra make_algebra(std::vector<std::string>, const BracketTable&);
  std::vector<std::string> labels_;
  std::vector<Vector> table_;
  std::map<std::string, std::string> rescaling_;
  std::string scalar_field_ = "Q";
};

/// Throws lwb::Error with code "antisymmetry_violation" (detail "(i,j)") or
/// "jacobi_violation" (detail "(i,j,k)", first failing increasing triple).
LieAlgebra make_algebra(std::vector<std::string> labels, const BracketTable& bracket);

/// Representation of a LieAlgebra: action[i] is the matrix of e_i.
class LieModule {
public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t algebra_dim() const noexcept { return action_.size(); }
  const SparseMatrix& action(std::size_t i) const { return action_.at(i); }
  /// Matrix of x = sum x_i e_i.
  SparseMatrix action(const Vector& x) const;
  Vector act(std::size_t i, const Vector& v) const { return action_.at(i).apply(v); }

private:
  friend LieModule make_module(const LieAlgebra&, std::vector<SparseMatrix>, std::size_t);
  std::size_t dim_ = 0;
  std::vector<SparseMatrix> action_;
};

/// Throws "dimension_mismatch" for malformed tables and
/// "representation_violation" (detail "(i,j)") if rho([e_i,e_j]) differs from
/// the commutator of rho(e_i) and rho(e_j).
LieModule make_module(const LieAlgebra& g, std::vector<SparseMatrix> action);
/// Explicit module dimension (needed when the algebra is zero-dimensional).
LieModule make_module(const LieAlgebra& g, std::vector<SparseMatrix> action, std::size_t dim);

LieModule trivial_module(const LieAlgebra& g, std::size_t dim);
LieModule adjoint_module(const LieAlgebra& g);

/// {v : x.v = 0 for all x}.
Subspace invariants_subspace(const LieAlgebra& g, const LieModule& v);

// Named algebras used throughout the workbench.

/// Abelian algebra of dimension n.
LieAlgebra abelian(std::size_t n);

/// sl2 in the circle realization U = 1/pi, H = cos(2 pi t)/pi, P = sin(2 pi t)/pi
/// with [U,H] = -2P, [U,P] = 2H, [H,P] = 2U. Basis order (U, H, P).
LieAlgebra sl2_circle();

/// span{l_-1, l_0, l_1} with [l_a, l_b] = (b - a) l_{a+b}. Basis order (l_-1, l_0, l_1).
LieAlgebra sl2_witt();

/// Heisenberg algebra [x, y] = z.
LieAlgebra heisenberg();

// JSON schema: {"labels": [...], "bracket": {"i,j": {"k": "p/q"}}, "scalar_field": "Q",
//               "rescaling": {...}}
nlohmann::json to_json(const LieAlgebra& g);
LieAlgebra algebra_from_json(const nlohmann::json& j);

// {"dim": n, "action": {"i": {"r,c": "p/q"}}}
nlohmann::json to_json(const LieModule& m);
LieModule module_from_json(const LieAlgebra& g, const nlohmann::json& j);

}  // namespace lwb::lie

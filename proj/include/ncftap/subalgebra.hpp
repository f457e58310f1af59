#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ncftap/algebra.hpp"
#include "ncftap/report.hpp"

namespace ncftap {

// A Gram-Schmidt candidate is discarded when its post-projection norm falls
// at or below this tolerance times (pre-projection norm + 1).
inline constexpr double kRankTol = 1e-8;

/// A unital *-subalgebra presented by a GNS-orthonormal basis.
class Subalgebra {
 public:
  /// span{I}.
  static Subalgebra span_identity(const AlgebraPtr& algebra);
  /// The whole algebra, with the matrix-unit basis.
  static Subalgebra full(const AlgebraPtr& algebra);
  /// Validates orthonormality, unitality and closure under adjoints and
  /// products; throws std::invalid_argument on failure.
  static Subalgebra from_orthonormal_basis(const AlgebraPtr& algebra,
                                           std::vector<AlgebraElement> basis,
                                           double tol = kDefaultTol);
  /// For bases that are orthonormal and closed by construction.
  static Subalgebra from_orthonormal_basis_unchecked(const AlgebraPtr& algebra,
                                                     std::vector<AlgebraElement> basis);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<AlgebraElement>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }

  /// GNS-orthogonal projection sum_i b_i <b_i, x>.
  AlgebraElement project(const AlgebraElement& x) const;
  /// ||x - P x||_2.
  double span_residual(const AlgebraElement& x) const;
  bool contains(const AlgebraElement& x, double tol = kDefaultTol) const {
    return span_residual(x) <= tol;
  }

  /// Full invariant check: Gram matrix, identity membership, adjoint and
  /// product closure.
  ValidationReport validate(double tol = kDefaultTol) const;

 private:
  Subalgebra(AlgebraPtr algebra, std::vector<AlgebraElement> basis)
      : algebra_(std::move(algebra)), basis_(std::move(basis)) {}

  AlgebraPtr algebra_;
  std::vector<AlgebraElement> basis_;

  friend Subalgebra make_subalgebra(const AlgebraPtr&, std::span<const AlgebraElement>);
};

/// Smallest unital *-subalgebra containing the generators: adjoin I, adjoints
/// and pairwise products until the dimension stabilizes, orthonormalizing by
/// modified Gram-Schmidt with the kRankTol rank tolerance.
Subalgebra make_subalgebra(const AlgebraPtr& algebra,
                           std::span<const AlgebraElement> generators);

/// Trace-preserving conditional expectation onto sub, realized as the
/// GNS-orthogonal projection (unique for a tracial state).
AlgebraElement conditional_expectation(const AlgebraElement& x, const Subalgebra& sub);

/// An increasing family of subalgebras over a discrete time grid.
/// Invariants are checked by validate_filtration, not at construction.
struct Filtration {
  std::vector<double> times;
  std::vector<Subalgebra> levels;

  const AlgebraPtr& algebra() const { return levels.front().algebra(); }
  int steps() const { return static_cast<int>(times.size()) - 1; }
  /// Grid index of t, or nullopt when t is off the grid.
  std::optional<int> index_of_time(double t) const;
};

using FiltrationPtr = std::shared_ptr<const Filtration>;

/// Per-level subalgebra invariants, level-0 = span{I}, and inclusion
/// residuals A_{t_k} into A_{t_{k+1}}.
ValidationReport validate_filtration(const Filtration& f, double tol = kDefaultTol);

}  // namespace ncftap

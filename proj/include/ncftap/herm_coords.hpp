#pragma once

#include "ncftap/algebra.hpp"

namespace ncftap {

/// Isometric real coordinates for the self-adjoint part of an algebra.
/// The chart is GNS-orthonormal: <x,y> = tau(xy) = coords(x).dot(coords(y))
/// for self-adjoint x, y.  to_coords reads only the hermitian part of its
/// argument.
class HermCoords {
 public:
  explicit HermCoords(AlgebraPtr algebra);

  int dim() const { return dim_; }
  const AlgebraPtr& algebra() const { return algebra_; }

  Eigen::VectorXd to_coords(const AlgebraElement& x) const;
  AlgebraElement from_coords(const Eigen::VectorXd& c) const;

 private:
  AlgebraPtr algebra_;
  int dim_;
};

}  // namespace ncftap

#include "ncftap/herm_coords.hpp"

#include <cmath>
#include <stdexcept>

namespace ncftap {

// Per block of dimension n with weight w the chart is
//   diagonal:      sqrt(w) x_ii
//   off-diagonal:  sqrt(2w) Re x_ij, sqrt(2w) Im x_ij   (i < j)
// which is the coefficient vector against the GNS-orthonormal hermitian basis
// e_ii/sqrt(w), (e_ij + e_ji)/sqrt(2w), i(e_ij - e_ji)/sqrt(2w).

HermCoords::HermCoords(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
  dim_ = algebra_->element_dim();
}

Eigen::VectorXd HermCoords::to_coords(const AlgebraElement& x) const {
  if (!x.algebra()->same_as(*algebra_))
    throw std::invalid_argument("element belongs to a different algebra");
  Eigen::VectorXd c(dim_);
  int pos = 0;
  const auto& dims = algebra_->block_dims();
  const auto& w = algebra_->trace_weights();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const Matrix& b = x.block(static_cast<int>(k));
    const double sw = std::sqrt(w[k]);
    const double s2w = std::sqrt(2.0 * w[k]);
    for (int i = 0; i < dims[k]; ++i) c(pos++) = sw * b(i, i).real();
    for (int i = 0; i < dims[k]; ++i)
      for (int j = i + 1; j < dims[k]; ++j) {
        // hermitian part entry h_ij = (b_ij + conj(b_ji))/2
        Complex h = 0.5 * (b(i, j) + std::conj(b(j, i)));
        c(pos++) = s2w * h.real();
        c(pos++) = s2w * h.imag();
      }
  }
  return c;
}

AlgebraElement HermCoords::from_coords(const Eigen::VectorXd& c) const {
  if (c.size() != dim_) throw std::invalid_argument("coordinate vector has wrong size");
  std::vector<Matrix> blocks;
  int pos = 0;
  const auto& dims = algebra_->block_dims();
  const auto& w = algebra_->trace_weights();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Matrix b = Matrix::Zero(dims[k], dims[k]);
    const double isw = 1.0 / std::sqrt(w[k]);
    const double is2w = 1.0 / std::sqrt(2.0 * w[k]);
    for (int i = 0; i < dims[k]; ++i) b(i, i) = Complex(c(pos++) * isw, 0.0);
    for (int i = 0; i < dims[k]; ++i)
      for (int j = i + 1; j < dims[k]; ++j) {
        double re = c(pos++) * is2w;
        double im = c(pos++) * is2w;
        b(i, j) = Complex(re, im);
        b(j, i) = Complex(re, -im);
      }
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(algebra_, std::move(blocks));
}

}  // namespace ncftap

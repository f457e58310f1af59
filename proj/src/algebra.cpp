#include "ncftap/algebra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncftap {

namespace {

std::vector<double> default_weights(const std::vector<int>& dims) {
  double hs = 0.0;
  for (int n : dims) hs += static_cast<double>(n) * n;
  std::vector<double> w(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) w[k] = dims[k] / hs;
  return w;
}

}  // namespace

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> block_dims)
    : MultiMatrixAlgebra(block_dims, default_weights(block_dims)) {}

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> block_dims,
                                       std::vector<double> trace_weights)
    : dims_(std::move(block_dims)), weights_(std::move(trace_weights)) {
  if (dims_.empty()) throw std::invalid_argument("algebra needs at least one block");
  if (weights_.size() != dims_.size())
    throw std::invalid_argument("trace_weights size must match block_dims");
  for (int n : dims_)
    if (n < 1) throw std::invalid_argument("block dimensions must be >= 1");
  double s = 0.0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (!(weights_[k] > 0.0)) throw std::invalid_argument("trace weights must be positive");
    s += weights_[k] * dims_[k];
  }
  // Enforce tau(I) = 1 by rescaling.
  for (double& w : weights_) w /= s;
}

int MultiMatrixAlgebra::total_dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), 0);
}

int MultiMatrixAlgebra::element_dim() const {
  int d = 0;
  for (int n : dims_) d += n * n;
  return d;
}

bool MultiMatrixAlgebra::same_as(const MultiMatrixAlgebra& other) const {
  return dims_ == other.dims_ && weights_ == other.weights_;
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw std::invalid_argument("element needs an algebra");
  const auto& dims = algebra_->block_dims();
  if (blocks_.size() != dims.size())
    throw std::invalid_argument("element block count does not match algebra");
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (blocks_[k].rows() != dims[k] || blocks_[k].cols() != dims[k])
      throw std::invalid_argument("element block shape does not match algebra");
}

AlgebraElement AlgebraElement::zero(const AlgebraPtr& algebra) {
  std::vector<Matrix> blocks;
  for (int n : algebra->block_dims()) blocks.push_back(Matrix::Zero(n, n));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraPtr& algebra) {
  std::vector<Matrix> blocks;
  for (int n : algebra->block_dims()) blocks.push_back(Matrix::Identity(n, n));
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::hermitian_part() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& b : blocks_) blocks.push_back(0.5 * (b + b.adjoint()));
  return AlgebraElement(algebra_, std::move(blocks));
}

double AlgebraElement::self_adjointness_residual() const {
  return gns_norm(*this - adjoint());
}

bool AlgebraElement::is_self_adjoint(double tol) const {
  return self_adjointness_residual() <= tol;
}

void ensure_same_algebra(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra() == b.algebra()) return;
  if (a.algebra() && b.algebra() && a.algebra()->same_as(*b.algebra())) return;
  throw std::invalid_argument("elements belong to different algebras");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  ensure_same_algebra(*this, rhs);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += rhs.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  ensure_same_algebra(*this, rhs);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= rhs.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex scalar) {
  for (Matrix& b : blocks_) b *= scalar;
  return *this;
}

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) {
  lhs += rhs;
  return lhs;
}

AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) {
  lhs -= rhs;
  return lhs;
}

AlgebraElement operator-(const AlgebraElement& x) { return Complex(-1.0, 0.0) * x; }

AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  ensure_same_algebra(lhs, rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(lhs.blocks().size());
  for (int k = 0; k < lhs.block_count(); ++k) blocks.push_back(lhs.block(k) * rhs.block(k));
  return AlgebraElement(lhs.algebra(), std::move(blocks));
}

AlgebraElement operator*(Complex scalar, AlgebraElement x) {
  x *= scalar;
  return x;
}

AlgebraElement operator*(double scalar, AlgebraElement x) {
  x *= Complex(scalar, 0.0);
  return x;
}

Complex trace(const AlgebraElement& x) {
  Complex t(0.0, 0.0);
  const auto& w = x.algebra()->trace_weights();
  for (int k = 0; k < x.block_count(); ++k) t += w[k] * x.block(k).trace();
  return t;
}

Complex gns_inner(const AlgebraElement& x, const AlgebraElement& y) {
  ensure_same_algebra(x, y);
  Complex t(0.0, 0.0);
  const auto& w = x.algebra()->trace_weights();
  // tau(x* y) = sum_k w_k sum_ij conj(x_ij) y_ij
  for (int k = 0; k < x.block_count(); ++k)
    t += w[k] * x.block(k).conjugate().cwiseProduct(y.block(k)).sum();
  return t;
}

double gns_norm(const AlgebraElement& x) {
  double s = 0.0;
  const auto& w = x.algebra()->trace_weights();
  for (int k = 0; k < x.block_count(); ++k) s += w[k] * x.block(k).squaredNorm();
  return std::sqrt(s);
}

double lp_norm(const AlgebraElement& x, double p) {
  if (p < 1.0) throw std::domain_error("lp_norm requires p >= 1");
  if (std::isinf(p)) return operator_norm(x);
  if (p == 2.0) return gns_norm(x);
  const auto& w = x.algebra()->trace_weights();
  double s = 0.0;
  for (int k = 0; k < x.block_count(); ++k) {
    // eigenvalues of |x| = singular values of the block
    Eigen::JacobiSVD<Matrix> svd(x.block(k));
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) s += w[k] * std::pow(sv(i), p);
  }
  return std::pow(s, 1.0 / p);
}

double operator_norm(const AlgebraElement& x) {
  double m = 0.0;
  for (int k = 0; k < x.block_count(); ++k) {
    if (x.block(k).rows() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(x.block(k));
    m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

double min_eigenvalue(const AlgebraElement& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.block_count(); ++k) {
    Matrix h = 0.5 * (x.block(k) + x.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

bool check_positive(const AlgebraElement& x, double tol) {
  if (!x.is_self_adjoint(tol)) throw std::domain_error("check_positive needs a self-adjoint element");
  return min_eigenvalue(x) >= -tol;
}

}  // namespace ncftap

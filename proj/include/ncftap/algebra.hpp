#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace ncftap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Default absolute tolerance for predicate checks (GNS norms, eigenvalues).
inline constexpr double kDefaultTol = 1e-8;
// Strict-positivity margin separating "faithful" from boundary densities.
inline constexpr double kDefaultTolPos = 1e-6;

/// A finite-dimensional W*-probability space in normal form: a direct sum of
/// complex matrix blocks M_{n_1} + ... + M_{n_K} with a faithful tracial
/// state tau(x) = sum_k w_k * tr(x_k).  Weights are rescaled at construction
/// so that tau(I) = sum_k w_k n_k = 1.
class MultiMatrixAlgebra {
 public:
  /// Hilbert-Schmidt-proportional weights w_k = n_k / sum_j n_j^2.
  explicit MultiMatrixAlgebra(std::vector<int> block_dims);
  MultiMatrixAlgebra(std::vector<int> block_dims, std::vector<double> trace_weights);

  const std::vector<int>& block_dims() const { return dims_; }
  const std::vector<double>& trace_weights() const { return weights_; }
  int block_count() const { return static_cast<int>(dims_.size()); }
  /// Hilbert-space dimension sum_k n_k.
  int total_dim() const;
  /// Complex dimension sum_k n_k^2; also the real dimension of the
  /// self-adjoint part.
  int element_dim() const;

  bool same_as(const MultiMatrixAlgebra& other) const;

 private:
  std::vector<int> dims_;
  std::vector<double> weights_;
};

using AlgebraPtr = std::shared_ptr<const MultiMatrixAlgebra>;

/// One complex matrix per algebra block; the universal value type.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraPtr& algebra);
  static AlgebraElement identity(const AlgebraPtr& algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int k) const { return blocks_[k]; }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  AlgebraElement adjoint() const;
  /// (x + x*)/2, projected onto the self-adjoint part.
  AlgebraElement hermitian_part() const;
  /// ||x - x*||_2
  double self_adjointness_residual() const;
  bool is_self_adjoint(double tol = kDefaultTol) const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex scalar);

 private:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator-(const AlgebraElement& x);
AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs);
AlgebraElement operator*(Complex scalar, AlgebraElement x);
AlgebraElement operator*(double scalar, AlgebraElement x);

/// Throws std::invalid_argument unless both elements live in the same algebra.
void ensure_same_algebra(const AlgebraElement& a, const AlgebraElement& b);

/// tau(x) = sum_k w_k tr(x_k)
Complex trace(const AlgebraElement& x);

/// GNS inner product <x,y> = tau(x* y); antilinear in the first argument.
Complex gns_inner(const AlgebraElement& x, const AlgebraElement& y);

/// ||x||_2 = tau(x* x)^{1/2}
double gns_norm(const AlgebraElement& x);

/// ||x||_p = tau[|x|^p]^{1/p} with |x| = (x* x)^{1/2}; p = inf gives the
/// operator norm.  Throws std::domain_error for p < 1.
double lp_norm(const AlgebraElement& x, double p);

/// Operator norm (largest singular value over all blocks).
double operator_norm(const AlgebraElement& x);

/// Smallest eigenvalue over all blocks of the hermitian part of x.
double min_eigenvalue(const AlgebraElement& x);

/// True iff min eigenvalue >= -tol.  Throws std::domain_error when x is not
/// self-adjoint within tol.
bool check_positive(const AlgebraElement& x, double tol = kDefaultTol);

}  // namespace ncftap

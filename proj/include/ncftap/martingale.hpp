#pragma once

#include "ncftap/integration.hpp"

namespace ncftap {

/// A normal state sigma(x) = tau(rho x) given by its density rho >= 0 with
/// tau(rho) = 1.  Construction validates the density and throws
/// std::domain_error on failure.
class State {
 public:
  explicit State(AlgebraElement density, double tol = kDefaultTol);

  const AlgebraElement& density() const { return density_; }
  double min_eigenvalue() const { return min_eig_; }
  bool faithful(double tol_pos = kDefaultTolPos) const { return min_eig_ >= tol_pos; }

  Complex value(const AlgebraElement& x) const { return trace(density_ * x); }

 private:
  AlgebraElement density_;
  double min_eig_;
};

struct ResidualVerdict {
  bool holds = false;
  double max_residual = 0.0;
};

/// The state-martingale predicate: sigma(a M_t a*) = sigma(a M_s a*) for all
/// a in A_s, s <= t.  By polarization over the complex field this reduces to
/// sigma(b_i (M_{t_{k+1}} - M_{t_k}) b_j*) = 0 over all ordered basis pairs of
/// every level, with residuals scaled by (1 + ||delta M||_inf) and compared
/// against tol.
ResidualVerdict is_martingale(const AdaptedProcess& M, const State& sigma,
                              double tol = kDefaultTol);

/// The zero-integral criterion: sigma[(H # X)_inf] = 0 for every simple
/// quantum trading strategy H, evaluated on an orthonormal basis of the
/// strategy-payoff subspace.  Agrees with is_martingale.
ResidualVerdict zero_integral_criterion(const AdaptedProcess& X, const State& sigma,
                                        double tol = kDefaultTol);

/// Builds the running integral Y_{t_k} = int_0^{t_k} H # dX and checks that it
/// is again a martingale under sigma (closure under strategy integration).
bool integral_martingale_check(const TradingStrategy& H, const AdaptedProcess& X,
                               const State& sigma, double tol = kDefaultTol);

}  // namespace ncftap

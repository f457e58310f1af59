#include "ncftap/martingale.hpp"

#include <stdexcept>

#include "ncftap/ftap.hpp"

namespace ncftap {

State::State(AlgebraElement density, double tol) : density_(std::move(density)), min_eig_(0.0) {
  if (density_.self_adjointness_residual() > tol)
    throw std::domain_error("state density is not self-adjoint");
  min_eig_ = ncftap::min_eigenvalue(density_);
  if (min_eig_ < -tol) throw std::domain_error("state density is not positive");
  if (std::abs(trace(density_) - Complex(1.0)) > tol)
    throw std::domain_error("state density does not have unit trace");
}

ResidualVerdict is_martingale(const AdaptedProcess& M, const State& sigma, double tol) {
  ValidationReport adapted = validate_adapted(M, tol);
  if (!adapted.pass())
    throw std::invalid_argument("is_martingale: process is not adapted: " +
                                adapted.first_failure()->name);
  ResidualVerdict out{true, 0.0};
  const Filtration& f = *M.filtration();
  for (int k = 0; k < M.steps(); ++k) {
    AlgebraElement dm = M.increment(k);
    double scale = 1.0 + operator_norm(dm);
    const auto& basis = f.levels[k].basis();
    for (const AlgebraElement& bi : basis) {
      // tau(rho b_i dM b_j*) = <b_j, dM* b_i* rho*> = gns_inner(b_j, rho b_i dM)
      AlgebraElement lhs = sigma.density() * bi * dm;
      for (const AlgebraElement& bj : basis) {
        double r = std::abs(gns_inner(bj, lhs)) / scale;
        out.max_residual = std::max(out.max_residual, r);
      }
    }
  }
  out.holds = out.max_residual <= tol;
  return out;
}

ResidualVerdict zero_integral_criterion(const AdaptedProcess& X, const State& sigma,
                                        double tol) {
  PayoffSubspace subspace = payoff_subspace(X, tol);
  ResidualVerdict out{true, 0.0};
  for (const AlgebraElement& k : subspace.basis)
    out.max_residual = std::max(out.max_residual, std::abs(sigma.value(k)));
  out.holds = out.max_residual <= tol;
  return out;
}

bool integral_martingale_check(const TradingStrategy& H, const AdaptedProcess& X,
                               const State& sigma, double tol) {
  SimpleBiprocess bi = strategy_to_biprocess(H);
  const Filtration& f = *X.filtration();
  std::vector<AlgebraElement> values;
  values.reserve(f.times.size());
  for (double t : f.times) values.push_back(stopped_integral(bi, f.times.front(), t, X));
  AdaptedProcess running(X.filtration(), std::move(values));
  return is_martingale(running, sigma, tol).holds;
}

}  // namespace ncftap

#pragma once

#include <optional>

#include "ncftap/martingale.hpp"
#include "ncftap/spectral_solver.hpp"

namespace ncftap {

struct PayoffGenerator {
  int step;
  AlgebraElement element;  // a in A_{t_step}; the payoff is a (dX_step) a*
};

/// The strategy-payoff subspace K^s: real span of the one-step payoffs
/// a (X_{t_{k+1}} - X_{t_k}) a* over a in A_{t_k} and all k, presented by a
/// GNS-orthonormal self-adjoint basis.  Provenance expresses each basis
/// vector as a real combination of generator payoffs, so any element of the
/// span reconstructs as a trading strategy.
struct PayoffSubspace {
  FiltrationPtr filtration;
  std::vector<AlgebraElement> basis;
  std::vector<PayoffGenerator> generators;
  // basis[r] = sum_g provenance(r, g) * payoff(generators[g])
  Eigen::MatrixXd provenance;

  int dim() const { return static_cast<int>(basis.size()); }
  /// Strategy whose payoff is sum_r basis_coeffs(r) * basis[r].
  TradingStrategy strategy_for(const Eigen::VectorXd& basis_coeffs) const;
};

/// Builds K^s from the polarization generator set {b_i, b_i + b_j,
/// b_i + i b_j} of each filtration level, orthonormalized with column
/// pivoting.  Throws std::invalid_argument when X is not adapted within tol.
PayoffSubspace payoff_subspace(const AdaptedProcess& X, double tol = kDefaultTol);

struct MartingaleSearchResult {
  // -inf marks an empty affine feasible set.
  double lambda_star = 0.0;
  std::optional<State> state;
  SpectralMaxStats stats;
};

/// Maximizes lambda_min(rho) over densities annihilating K^s:
/// rho = rho*, tau(rho) = 1, tau(rho k_i) = 0.  lambda_star > tol_pos
/// certifies a faithful martingale state.
MartingaleSearchResult find_martingale_state(const AdaptedProcess& X,
                                             double tol = kDefaultTol,
                                             const SpectralMaxOptions& options = {});
MartingaleSearchResult find_martingale_state(const PayoffSubspace& subspace,
                                             double tol = kDefaultTol,
                                             const SpectralMaxOptions& options = {});

struct ArbitrageCertificate {
  TradingStrategy strategy;
  AlgebraElement payoff;  // k = integral of the strategy, tau(k) = 1
};

struct ArbitrageSearchResult {
  // -inf marks an empty/untraceable slice (no PSD nonzero payoff exists).
  double mu_star = 0.0;
  std::optional<ArbitrageCertificate> certificate;
  SpectralMaxStats stats;
};

/// Maximizes mu = lambda_min(k) over k in K^s with tau(k) = 1.  When every
/// element of K^s is traceless no PSD nonzero payoff exists (tau faithful)
/// and the search reports none immediately.
ArbitrageSearchResult find_arbitrage(const AdaptedProcess& X, double tol = kDefaultTol,
                                     const SpectralMaxOptions& options = {});
ArbitrageSearchResult find_arbitrage(const PayoffSubspace& subspace,
                                     double tol = kDefaultTol,
                                     const SpectralMaxOptions& options = {});

enum class Outcome { kEms, kArbitrage, kUndecided };

std::string to_string(Outcome o);

/// Decision of the no-free-lunch alternative with machine-verifiable
/// certificates.  UNDECIDED is an honest numerical-boundary output carrying
/// both solver margins.
struct Verdict {
  Outcome outcome = Outcome::kUndecided;
  double lambda_star = 0.0;  // martingale-side margin (-inf: infeasible)
  double mu_star = 0.0;      // arbitrage-side margin (NaN: search not run)
  std::optional<State> ems_state;
  std::optional<ArbitrageCertificate> arbitrage;
};

/// Runs find_martingale_state; EMS when lambda* > tol_pos.  Otherwise runs
/// find_arbitrage; ARBITRAGE when mu* >= -tol.  Otherwise UNDECIDED.
Verdict check_nfl(const AdaptedProcess& X, double tol = kDefaultTol,
                  double tol_pos = kDefaultTolPos, const SpectralMaxOptions& options = {});

/// Recomputes every certificate invariant from scratch: density validity,
/// faithfulness margin, annihilation of a freshly computed payoff basis and
/// the martingale predicate for EMS; strategy adaptedness, payoff
/// reconstruction, positivity and normalization for ARBITRAGE.
ValidationReport verify_certificate(const Verdict& v, const AdaptedProcess& X,
                                    double tol = kDefaultTol,
                                    double tol_pos = kDefaultTolPos);

}  // namespace ncftap

#include "ncftap/ftap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncftap {

namespace {

constexpr double kSpanEps = 1e-10;  // membership cut for I against K^s
const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TradingStrategy PayoffSubspace::strategy_for(const Eigen::VectorXd& basis_coeffs) const {
  if (basis_coeffs.size() != dim())
    throw std::invalid_argument("coefficient count does not match the payoff basis");
  Eigen::VectorXd gamma = provenance.transpose() * basis_coeffs;
  std::vector<std::vector<StrategyLeg>> steps(filtration->steps());
  for (Eigen::Index g = 0; g < gamma.size(); ++g) {
    if (gamma(g) == 0.0) continue;
    steps[generators[g].step].push_back({gamma(g), generators[g].element});
  }
  return TradingStrategy(filtration, std::move(steps));
}

PayoffSubspace payoff_subspace(const AdaptedProcess& X, double tol) {
  ValidationReport adapted = validate_adapted(X, tol);
  if (!adapted.pass())
    throw std::invalid_argument("payoff_subspace: process is not adapted: " +
                                adapted.first_failure()->name);
  const Filtration& f = *X.filtration();
  HermCoords chart(f.algebra());

  PayoffSubspace out;
  out.filtration = X.filtration();

  // Polarization generator set per step: a (dX) a* over a in
  // {b_i} u {b_i + b_j} u {b_i + i b_j}, whose real span is
  // {a dX a* : a in A_{t_k}}.
  std::vector<Eigen::VectorXd> gen_coords;
  for (int k = 0; k < X.steps(); ++k) {
    AlgebraElement dx = X.increment(k);
    const auto& basis = f.levels[k].basis();
    const int d = static_cast<int>(basis.size());
    auto add_generator = [&](AlgebraElement a) {
      AlgebraElement payoff = (a * dx * a.adjoint()).hermitian_part();
      gen_coords.push_back(chart.to_coords(payoff));
      out.generators.push_back({k, std::move(a)});
    };
    for (int i = 0; i < d; ++i) add_generator(basis[i]);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        add_generator(basis[i] + basis[j]);
        add_generator(basis[i] + Complex(0.0, 1.0) * basis[j]);
      }
  }

  const int G = static_cast<int>(gen_coords.size());
  const int D = chart.dim();
  Eigen::MatrixXd R(D, G);
  Eigen::VectorXd pre(G);
  for (int g = 0; g < G; ++g) {
    R.col(g) = gen_coords[g];
    pre(g) = R.col(g).norm();
  }

  // Column-pivoted modified Gram-Schmidt keeps provenance coefficients
  // modest: each pivot has the largest residual norm available.
  std::vector<Eigen::VectorXd> basis_coords;
  std::vector<int> pivot_gen;
  std::vector<double> pivot_norm;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(G, std::min(G, D));
  std::vector<bool> consumed(G, false);
  while (static_cast<int>(basis_coords.size()) < D) {
    int best = -1;
    double best_norm = 0.0;
    for (int g = 0; g < G; ++g) {
      if (consumed[g]) continue;
      double n = R.col(g).norm();
      if (n > kRankTol * (pre(g) + 1.0) && n > best_norm) {
        best = g;
        best_norm = n;
      }
    }
    if (best < 0) break;
    Eigen::VectorXd v = R.col(best);
    for (std::size_t r = 0; r < basis_coords.size(); ++r) {
      double c2 = basis_coords[r].dot(v);
      v -= c2 * basis_coords[r];
      C(best, r) += c2;
    }
    double nv = v.norm();
    consumed[best] = true;
    if (nv <= kRankTol * (pre(best) + 1.0)) continue;
    v /= nv;
    const int s = static_cast<int>(basis_coords.size());
    basis_coords.push_back(v);
    pivot_gen.push_back(best);
    pivot_norm.push_back(nv);
    for (int g = 0; g < G; ++g) {
      if (consumed[g]) continue;
      double c = v.dot(R.col(g));
      R.col(g) -= c * v;
      C(g, s) = c;
    }
  }

  const int rank = static_cast<int>(basis_coords.size());
  out.provenance = Eigen::MatrixXd::Zero(rank, G);
  for (int s = 0; s < rank; ++s) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(G);
    row(pivot_gen[s]) = 1.0;
    for (int r = 0; r < s; ++r) row -= C(pivot_gen[s], r) * out.provenance.row(r);
    out.provenance.row(s) = row / pivot_norm[s];
  }
  out.basis.reserve(rank);
  for (const auto& v : basis_coords) out.basis.push_back(chart.from_coords(v));
  return out;
}

MartingaleSearchResult find_martingale_state(const AdaptedProcess& X, double tol,
                                             const SpectralMaxOptions& options) {
  return find_martingale_state(payoff_subspace(X, tol), tol, options);
}

MartingaleSearchResult find_martingale_state(const PayoffSubspace& subspace, double tol,
                                             const SpectralMaxOptions& options) {
  const AlgebraPtr& alg = subspace.filtration->algebra();
  HermCoords chart(alg);
  const int D = chart.dim();
  const int r = subspace.dim();

  Eigen::MatrixXd K(r, D);
  for (int i = 0; i < r; ++i) K.row(i) = chart.to_coords(subspace.basis[i]).transpose();
  Eigen::VectorXd icoords = chart.to_coords(AlgebraElement::identity(alg));

  MartingaleSearchResult res;
  // tau(rho) = 1 is inconsistent with tau(rho k) = 0 for all k exactly when
  // I lies in K^s.
  Eigen::VectorXd resid = icoords;
  if (r > 0) resid -= K.transpose() * (K * icoords);
  if (resid.norm() <= kSpanEps) {
    res.lambda_star = -kInf;
    return res;
  }
  Eigen::VectorXd rho0 = resid / resid.squaredNorm();

  Eigen::MatrixXd A(r + 1, D);
  for (int i = 0; i < r; ++i) A.row(i) = K.row(i);
  A.row(r) = icoords.transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.transpose());
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd directions = Q.rightCols(D - (r + 1));

  SpectralMaxResult sol = maximize_min_eigenvalue(chart, rho0, directions, options);
  res.lambda_star = sol.value;
  res.stats = sol.stats;
  if (sol.value > -tol) res.state = State(chart.from_coords(sol.coords), tol);
  return res;
}

ArbitrageSearchResult find_arbitrage(const AdaptedProcess& X, double tol,
                                     const SpectralMaxOptions& options) {
  return find_arbitrage(payoff_subspace(X, tol), tol, options);
}

ArbitrageSearchResult find_arbitrage(const PayoffSubspace& subspace, double tol,
                                     const SpectralMaxOptions& options) {
  ArbitrageSearchResult res;
  res.mu_star = -kInf;
  const int r = subspace.dim();
  if (r == 0) return res;

  const AlgebraPtr& alg = subspace.filtration->algebra();
  HermCoords chart(alg);
  const int D = chart.dim();

  Eigen::VectorXd v(r);
  for (int i = 0; i < r; ++i) v(i) = trace(subspace.basis[i]).real();
  // Every element traceless -> no PSD nonzero payoff exists at all, since a
  // faithful tau forces tau(k) > 0 for PSD k != 0.
  if (v.norm() <= kSpanEps) return res;
  Eigen::VectorXd c0 = v / v.squaredNorm();  // tau(sum c0_i k_i) = 1

  Eigen::MatrixXd K(r, D);
  for (int i = 0; i < r; ++i) K.row(i) = chart.to_coords(subspace.basis[i]).transpose();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::MatrixXd Qc = qr.householderQ();
  Eigen::MatrixXd Nc = Qc.rightCols(r - 1);  // trace-zero slice of K^s coefficients

  Eigen::VectorXd base = K.transpose() * c0;
  Eigen::MatrixXd directions = K.transpose() * Nc;

  SpectralMaxResult sol = maximize_min_eigenvalue(chart, base, directions, options);
  res.mu_star = sol.value;
  res.stats = sol.stats;
  if (sol.value >= -tol) {
    Eigen::VectorXd cstar = c0 + Nc * sol.theta;
    res.certificate =
        ArbitrageCertificate{subspace.strategy_for(cstar), chart.from_coords(sol.coords)};
  }
  return res;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kEms: return "EMS";
    case Outcome::kArbitrage: return "ARBITRAGE";
    case Outcome::kUndecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

Verdict check_nfl(const AdaptedProcess& X, double tol, double tol_pos,
                  const SpectralMaxOptions& options) {
  PayoffSubspace subspace = payoff_subspace(X, tol);
  Verdict v;
  v.mu_star = std::numeric_limits<double>::quiet_NaN();

  MartingaleSearchResult ms = find_martingale_state(subspace, tol, options);
  v.lambda_star = ms.lambda_star;
  if (ms.lambda_star > tol_pos && ms.state) {
    v.outcome = Outcome::kEms;
    v.ems_state = std::move(ms.state);
    return v;
  }

  ArbitrageSearchResult arb = find_arbitrage(subspace, tol, options);
  v.mu_star = arb.mu_star;
  if (arb.mu_star >= -tol && arb.certificate) {
    v.outcome = Outcome::kArbitrage;
    v.arbitrage = std::move(arb.certificate);
    return v;
  }

  // Numerical boundary; exact arithmetic would forbid this.
  v.outcome = Outcome::kUndecided;
  return v;
}

ValidationReport verify_certificate(const Verdict& v, const AdaptedProcess& X, double tol,
                                    double tol_pos) {
  ValidationReport report;
  switch (v.outcome) {
    case Outcome::kEms: {
      report.add_flag("ems certificate present", v.ems_state.has_value());
      if (!v.ems_state) break;
      const AlgebraElement& rho = v.ems_state->density();
      report.add("density self-adjoint", rho.self_adjointness_residual(), tol);
      double me = min_eigenvalue(rho);
      report.add("density faithfulness deficit", std::max(0.0, tol_pos - me), 0.0);
      report.add("density unit trace", std::abs(trace(rho) - Complex(1.0)), tol);
      PayoffSubspace subspace = payoff_subspace(X, tol);
      double worst = 0.0;
      for (const AlgebraElement& k : subspace.basis)
        worst = std::max(worst, std::abs(v.ems_state->value(k)));
      report.add("payoff basis annihilated", worst, tol);
      ResidualVerdict mart = is_martingale(X, *v.ems_state, tol);
      report.add("martingale residual", mart.max_residual, tol);
      report.add_flag("martingale verdict", mart.holds);
      break;
    }
    case Outcome::kArbitrage: {
      report.add_flag("arbitrage certificate present", v.arbitrage.has_value());
      if (!v.arbitrage) break;
      const ArbitrageCertificate& cert = *v.arbitrage;
      report.merge(validate_adapted(cert.strategy, tol), "strategy ");
      AlgebraElement rebuilt = stochastic_integral(cert.strategy, X);
      report.add("payoff reconstruction", gns_norm(rebuilt - cert.payoff), tol);
      report.add("payoff self-adjoint", cert.payoff.self_adjointness_residual(), tol);
      report.add("payoff negativity", std::max(0.0, -min_eigenvalue(cert.payoff)), tol);
      report.add("payoff unit trace", std::abs(trace(cert.payoff) - Complex(1.0)), tol);
      report.add_flag("payoff nonzero", gns_norm(cert.payoff) > tol);
      break;
    }
    case Outcome::kUndecided:
      report.add_flag("undecided verdict carries no certificate", true);
      break;
  }
  return report;
}

}  // namespace ncftap

#include <doctest.h>

#include "ncftap/ftap.hpp"
#include "ncftap/market_io.hpp"
#include "test_helpers.hpp"

using namespace ncftap;

namespace {

// one-period market on the diagonal algebra C^2 with X_1 - X_0 = diag(d1, d2)
struct DiagInstance {
  AlgebraPtr alg;
  FiltrationPtr filtration;
  AdaptedProcess X;
};

DiagInstance diag_instance(double d1, double d2) {
  auto alg = std::make_shared<MultiMatrixAlgebra>(std::vector<int>{1, 1},
                                                  std::vector<double>{0.5, 0.5});
  auto f = std::make_shared<Filtration>();
  f->times = {0.0, 1.0};
  f->levels = {Subalgebra::span_identity(alg), Subalgebra::full(alg)};
  AlgebraElement x0 = AlgebraElement::identity(alg);
  AlgebraElement dx(alg, {Matrix::Constant(1, 1, Complex(d1, 0.0)),
                          Matrix::Constant(1, 1, Complex(d2, 0.0))});
  std::vector<AlgebraElement> values{x0, x0 + dx};
  return {alg, f, AdaptedProcess(f, values)};
}

// independent oracle for the one-period diagonal instance: the two affine
// constraints pin the density, so solve them directly
Eigen::Vector2d diag_density_oracle(double d1, double d2) {
  Eigen::Matrix2d A;
  A << 0.5, 0.5, 0.5 * d1, 0.5 * d2;
  return A.colPivHouseholderQr().solve(Eigen::Vector2d(1.0, 0.0));
}

int mc_rank_oracle(const AdaptedProcess& X, int samples, Rng& rng) {
  HermCoords chart(X.filtration()->algebra());
  Eigen::MatrixXd S(samples, chart.dim());
  for (int s = 0; s < samples; ++s) {
    int step = rng.uniform_int(0, X.steps() - 1);
    AlgebraElement a = random_in_span(X.filtration()->levels[step], rng);
    S.row(s) = chart.to_coords((a * X.increment(step) * a.adjoint()).hermitian_part());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-6 * (1.0 + smax)) ++rank;
  return rank;
}

double payoff_reconstruction_residual(const PayoffSubspace& sub, const AdaptedProcess& X) {
  double worst = 0.0;
  for (int r = 0; r < sub.dim(); ++r) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(sub.dim());
    e(r) = 1.0;
    AlgebraElement rebuilt = stochastic_integral(sub.strategy_for(e), X);
    worst = std::max(worst, gns_norm(rebuilt - sub.basis[r]));
  }
  return worst;
}

}  // namespace

TEST_CASE("payoff subspace: constant process spans nothing") {
  Market market = random_market(71, {2, 2}, 2);
  std::vector<AlgebraElement> values(market.filtration->times.size(),
                                     AlgebraElement::identity(market.algebra));
  PayoffSubspace sub = payoff_subspace(AdaptedProcess(market.filtration, values));
  CHECK(sub.dim() == 0);
}

TEST_CASE("payoff subspace of the one-period diagonal instance") {
  DiagInstance inst = diag_instance(1.0, -1.0);
  PayoffSubspace sub = payoff_subspace(inst.X);
  REQUIRE(sub.dim() == 1);
  // only a in C I is available, so the span is R * diag(1,-1)
  AlgebraElement expected(inst.alg, {Matrix::Constant(1, 1, Complex(1.0, 0.0)),
                                     Matrix::Constant(1, 1, Complex(-1.0, 0.0))});
  CHECK(gns_norm(sub.basis[0] - expected) <= 1e-12);
}

TEST_CASE("payoff subspace: full level-0 of M_2 against the Monte-Carlo rank oracle") {
  auto alg = std::make_shared<MultiMatrixAlgebra>(std::vector<int>{2});
  auto f = std::make_shared<Filtration>();
  f->times = {0.0, 1.0};
  f->levels = {Subalgebra::full(alg), Subalgebra::full(alg)};
  Matrix dx(2, 2);
  dx << 1.4, Complex(0.2, 0.1), Complex(0.2, -0.1), -0.8;
  std::vector<AlgebraElement> values{AlgebraElement::zero(alg), AlgebraElement(alg, {dx})};
  AdaptedProcess X(f, values);

  PayoffSubspace sub = payoff_subspace(X);
  Rng rng(72);
  CHECK(sub.dim() == mc_rank_oracle(X, 500, rng));
  CHECK(payoff_reconstruction_residual(sub, X) <= 1e-9);
}

TEST_CASE("payoff subspace rank and provenance on random instances") {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    Market market = random_market(900 + trial, {2, 2}, 1 + trial % 3);
    AdaptedProcess X = market.process();
    PayoffSubspace sub = payoff_subspace(X);
    CHECK(sub.dim() == mc_rank_oracle(X, 400, rng));
    CHECK(payoff_reconstruction_residual(sub, X) <= 1e-9);
    for (const AlgebraElement& b : sub.basis) CHECK(b.self_adjointness_residual() <= 1e-12);
  }
}

TEST_CASE("payoff subspace rejects non-adapted processes") {
  Market market = random_market(74, {2, 2}, 2);
  Rng rng(75);
  std::vector<AlgebraElement> broken = market.process_values;
  broken[1] = random_self_adjoint(market.algebra, rng);
  CHECK_THROWS_AS(payoff_subspace(AdaptedProcess(market.filtration, broken)),
                  std::invalid_argument);
}

TEST_CASE("find_martingale_state: hand-solved diagonal certificates") {
  {
    DiagInstance inst = diag_instance(1.0, -1.0);
    MartingaleSearchResult res = find_martingale_state(inst.X);
    REQUIRE(res.state.has_value());
    CHECK(res.lambda_star == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gns_norm(res.state->density() - AlgebraElement::identity(inst.alg)) <= 1e-9);
    Eigen::Vector2d oracle = diag_density_oracle(1.0, -1.0);
    CHECK(res.state->density().block(0)(0, 0).real() == doctest::Approx(oracle(0)).epsilon(1e-9));
    CHECK(res.state->density().block(1)(0, 0).real() == doctest::Approx(oracle(1)).epsilon(1e-9));
  }
  {
    DiagInstance inst = diag_instance(2.0, -1.0);
    MartingaleSearchResult res = find_martingale_state(inst.X);
    REQUIRE(res.state.has_value());
    Eigen::Vector2d oracle = diag_density_oracle(2.0, -1.0);
    CHECK(oracle(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(res.lambda_star == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(res.state->density().block(0)(0, 0).real() ==
          doctest::Approx(oracle(0)).epsilon(1e-9));
    CHECK(res.state->density().block(1)(0, 0).real() ==
          doctest::Approx(oracle(1)).epsilon(1e-9));
  }
  {
    // dX = I: tau(rho I) = 0 contradicts tau(rho) = 1
    DiagInstance inst = diag_instance(1.0, 1.0);
    MartingaleSearchResult res = find_martingale_state(inst.X);
    CHECK_FALSE(res.state.has_value());
    CHECK(std::isinf(res.lambda_star));
    CHECK(res.lambda_star < 0.0);
  }
}

TEST_CASE("find_arbitrage: pinned cases") {
  {
    // dX = I: strategy {(1, I)}, payoff I, mu* = 1, all exact
    DiagInstance inst = diag_instance(1.0, 1.0);
    ArbitrageSearchResult res = find_arbitrage(inst.X);
    REQUIRE(res.certificate.has_value());
    CHECK(res.mu_star == 1.0);
    CHECK(gns_norm(res.certificate->payoff - AlgebraElement::identity(inst.alg)) == 0.0);
    REQUIRE(res.certificate->strategy.steps()[0].size() == 1);
    CHECK(res.certificate->strategy.steps()[0][0].weight == doctest::Approx(1.0));
    CHECK(gns_norm(res.certificate->strategy.steps()[0][0].element -
                   AlgebraElement::identity(inst.alg)) == 0.0);
  }
  {
    // span{diag(2,-1)} carries both signs: no PSD nonzero element
    DiagInstance inst = diag_instance(2.0, -1.0);
    ArbitrageSearchResult res = find_arbitrage(inst.X);
    CHECK_FALSE(res.certificate.has_value());
    CHECK(res.mu_star < -kDefaultTol);
  }
}

TEST_CASE("find_arbitrage on M_3 with a diagonal level-0") {
  // level 0 deliberately larger than span{I}: the searches only need
  // adaptedness, not the A_0 = C I convention
  auto alg = std::make_shared<MultiMatrixAlgebra>(std::vector<int>{1, 1, 1});
  auto f = std::make_shared<Filtration>();
  f->times = {0.0, 1.0};
  f->levels = {Subalgebra::full(alg), Subalgebra::full(alg)};
  AlgebraElement dx(alg, {Matrix::Constant(1, 1, Complex(1.0, 0.0)),
                          Matrix::Constant(1, 1, Complex(1.0, 0.0)),
                          Matrix::Constant(1, 1, Complex(-1.0, 0.0))});
  std::vector<AlgebraElement> values{AlgebraElement::zero(alg), dx};
  AdaptedProcess X(f, values);

  // hand witness: a = e_11 gives payoff e_11 dX e_11 = e_11 >= 0, nonzero
  AlgebraElement e11(alg, {Matrix::Constant(1, 1, Complex(1.0, 0.0)),
                           Matrix::Constant(1, 1, Complex(0.0, 0.0)),
                           Matrix::Constant(1, 1, Complex(0.0, 0.0))});
  CHECK(gns_norm(e11 * dx * e11.adjoint() - e11) == 0.0);

  PayoffSubspace sub = payoff_subspace(X);
  // e_11 lies in the computed span
  AlgebraElement proj = AlgebraElement::zero(alg);
  HermCoords chart(alg);
  Eigen::VectorXd target = chart.to_coords(e11);
  for (const AlgebraElement& b : sub.basis) {
    Eigen::VectorXd bc = chart.to_coords(b);
    proj += bc.dot(target) * b;
  }
  CHECK(gns_norm(proj - e11) <= 1e-10);

  ArbitrageSearchResult res = find_arbitrage(sub);
  REQUIRE(res.certificate.has_value());
  CHECK(res.mu_star >= -kDefaultTol);
  Verdict v;
  v.outcome = Outcome::kArbitrage;
  v.arbitrage = res.certificate;
  CHECK(verify_certificate(v, X).pass());
}

TEST_CASE("check_nfl: the three pinned verdicts") {
  CHECK(check_nfl(diag_instance(1.0, -1.0).X).outcome == Outcome::kEms);
  CHECK(check_nfl(diag_instance(1.0, 1.0).X).outcome == Outcome::kArbitrage);

  // classical binomial embed: EMS with the risk-neutral measure on the diagonal
  Market market = embed_classical(binomial_tree(1, 1.2, 0.9, 0.05));
  Verdict v = check_nfl(market.process());
  REQUIRE(v.outcome == Outcome::kEms);
  double q = (1.05 - 0.9) / (1.2 - 0.9);  // = 0.5 closed form
  const Matrix& rho = v.ems_state->density().block(0);
  CHECK(0.5 * rho(0, 0).real() == doctest::Approx(q).epsilon(1e-7));
  CHECK(0.5 * rho(1, 1).real() == doctest::Approx(1.0 - q).epsilon(1e-7));
}

TEST_CASE("check_nfl: honest UNDECIDED at the numerical boundary") {
  // lambda* = 2e-7 lies between tol_pos and the arbitrage cut
  DiagInstance inst = diag_instance(1.0, -1e-7);
  Verdict v = check_nfl(inst.X);
  CHECK(v.outcome == Outcome::kUndecided);
  CHECK(v.lambda_star > 0.0);
  CHECK(v.lambda_star < kDefaultTolPos);
  CHECK(v.mu_star < -kDefaultTol);
  CHECK(verify_certificate(v, inst.X).pass());  // vacuous but well-formed
}

TEST_CASE("verify_certificate flags tampering") {
  Market market = embed_classical(binomial_tree(1, 1.2, 0.9, 0.05));
  AdaptedProcess X = market.process();
  Verdict v = check_nfl(X);
  REQUIRE(v.outcome == Outcome::kEms);
  REQUIRE(verify_certificate(v, X).pass());

  // zero out one eigenvalue of the density (renormalized): faithfulness fails
  {
    const AlgebraElement& rho = v.ems_state->density();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.block(0));
    Matrix proj = es.eigenvectors().col(0) * es.eigenvectors().col(0).adjoint();
    AlgebraElement p(market.algebra, {proj});
    AlgebraElement tampered = rho - es.eigenvalues()(0) * p;
    tampered *= Complex(1.0 / trace(tampered).real(), 0.0);
    Verdict bad = v;
    bad.ems_state = State(tampered);
    ValidationReport report = verify_certificate(bad, X);
    CHECK_FALSE(report.pass());
    bool faithfulness_failed = false;
    for (const auto& c : report.checks())
      if (!c.pass && c.name.find("faithfulness") != std::string::npos)
        faithfulness_failed = true;
    CHECK(faithfulness_failed);
  }

  // arbitrage payoff shifted by eps I without updating the strategy
  {
    Verdict arb = check_nfl(diag_instance(1.0, 1.0).X);
    REQUIRE(arb.outcome == Outcome::kArbitrage);
    const double eps = 1e-3;
    Verdict bad = arb;
    bad.arbitrage->payoff += eps * AlgebraElement::identity(bad.arbitrage->payoff.algebra());
    ValidationReport report = verify_certificate(bad, diag_instance(1.0, 1.0).X);
    CHECK_FALSE(report.pass());
    for (const auto& c : report.checks())
      if (c.name == "payoff reconstruction")
        CHECK(c.residual == doctest::Approx(eps).epsilon(1e-6));
  }
}

TEST_CASE("scaling invariance of the verdict and certificates") {
  for (int trial = 0; trial < 6; ++trial) {
    Market market = random_market(1000 + trial, {2, 2}, 2);
    AdaptedProcess X = market.process();
    Verdict base = check_nfl(X);
    for (double c : {0.5, 2.0, 10.0}) {
      std::vector<AlgebraElement> scaled;
      for (const AlgebraElement& x : market.process_values) scaled.push_back(c * x);
      Verdict v = check_nfl(AdaptedProcess(market.filtration, scaled));
      CHECK(v.outcome == base.outcome);
      if (base.outcome == Outcome::kEms)
        CHECK(gns_norm(v.ems_state->density() - base.ems_state->density()) <= 1e-6);
      if (base.outcome == Outcome::kArbitrage)
        CHECK(gns_norm(v.arbitrage->payoff - base.arbitrage->payoff) <= 1e-6);
    }
  }
}

TEST_CASE("dichotomy mini-batch with certificate verification") {
  int undecided = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> dims = (trial % 3 == 0)   ? std::vector<int>{2, 2}
                            : (trial % 3 == 1) ? std::vector<int>{3}
                                               : std::vector<int>{1, 2};
    Market market = random_market(1100 + trial, dims, 1 + trial % 3);
    AdaptedProcess X = market.process();
    Verdict v = check_nfl(X);
    if (v.outcome == Outcome::kUndecided) {
      ++undecided;
      continue;
    }
    CHECK(verify_certificate(v, X).pass());

    // the two certificates never both verify
    PayoffSubspace sub = payoff_subspace(X);
    if (v.outcome == Outcome::kEms) {
      ArbitrageSearchResult other = find_arbitrage(sub);
      if (other.certificate) {
        Verdict w;
        w.outcome = Outcome::kArbitrage;
        w.arbitrage = other.certificate;
        CHECK_FALSE(verify_certificate(w, X).pass());
      }
    } else {
      MartingaleSearchResult other = find_martingale_state(sub);
      CHECK(other.lambda_star <= kDefaultTolPos);
    }
  }
  CHECK(undecided <= 1);
}

TEST_CASE("classical oracle") {
  {
    ClassicalVerdict v = classical_oracle(binomial_tree(1, 1.2, 0.9, 0.05));
    REQUIRE(v.ems);
    REQUIRE(v.leaf_measure.size() == 2);
    CHECK(v.leaf_measure[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.leaf_measure[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    // both branches beat cash: dominance arbitrage
    ClassicalVerdict v = classical_oracle(binomial_tree(1, 1.1, 1.05, 0.0));
    CHECK_FALSE(v.ems);
    CHECK(!v.violation.empty());
  }
  {
    // single constant state
    ClassicalTree tree;
    tree.rate = 0.0;
    tree.prices = {{1.0}, {1.0}};
    tree.branch_factors = {{1}};
    ClassicalVerdict v = classical_oracle(tree);
    CHECK(v.ems);
    CHECK(v.leaf_measure == std::vector<double>{1.0});
  }
  {
    // trinomial with an interior target: strictly positive measure
    ClassicalTree tree;
    tree.rate = 0.0;
    tree.prices = {{1.0}, {1.3, 1.0, 0.8}};
    tree.branch_factors = {{3}};
    ClassicalVerdict v = classical_oracle(tree);
    REQUIRE(v.ems);
    double mean = 0.0, total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(v.leaf_measure[i] > 0.0);
      total += v.leaf_measure[i];
      mean += v.leaf_measure[i] * tree.prices[1][i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-4));
  }
  {
    // multi-period measures multiply along paths
    ClassicalVerdict v = classical_oracle(binomial_tree(2, 1.2, 0.9, 0.05));
    REQUIRE(v.ems);
    REQUIRE(v.leaf_measure.size() == 4);
    for (double q : v.leaf_measure) CHECK(q == doctest::Approx(0.25).epsilon(1e-9));
  }
  CHECK_THROWS_AS(classical_oracle(binomial_tree(5, 1.2, 0.9, 0.0)), std::domain_error);
}

#include <doctest.h>

#include "ncftap/models.hpp"

using namespace ncftap;

namespace {

// two-period random market reused across cases
Market test_market(std::uint64_t seed = 31) { return random_market(seed, {2, 2}, 2); }

SimpleBiprocess identity_biprocess(const FiltrationPtr& f) {
  AlgebraElement id = AlgebraElement::identity(f->algebra());
  std::vector<std::vector<BiprocessPair>> steps(f->steps(), {BiprocessPair{id, id}});
  return SimpleBiprocess(f, std::move(steps));
}

// flatten sum_j A_j (x) B_j into per-(block,block) Kronecker matrices; the
// independent tensor-equality oracle for small dimensions
std::vector<Matrix> kron_flatten(const SimpleBiprocess& H, int step) {
  const AlgebraPtr& alg = H.filtration()->algebra();
  std::vector<Matrix> out;
  for (int kb = 0; kb < alg->block_count(); ++kb)
    for (int lb = 0; lb < alg->block_count(); ++lb) {
      int n = alg->block_dims()[kb], m = alg->block_dims()[lb];
      Matrix acc = Matrix::Zero(n * m, n * m);
      for (const BiprocessPair& p : H.steps()[step]) {
        const Matrix& a = p.left.block(kb);
        const Matrix& b = p.right.block(lb);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) acc.block(i * m, j * m, m, m) += a(i, j) * b;
      }
      out.push_back(std::move(acc));
    }
  return out;
}

double kron_distance(const SimpleBiprocess& H, const SimpleBiprocess& G, int step) {
  auto h = kron_flatten(H, step);
  auto g = kron_flatten(G, step);
  double d = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) d = std::max(d, (h[i] - g[i]).norm());
  return d;
}

}  // namespace

TEST_CASE("identity biprocess telescopes to X_end - X_0") {
  Market market = test_market();
  AdaptedProcess X = market.process();
  AlgebraElement integral = stochastic_integral(identity_biprocess(market.filtration), X);
  CHECK(gns_norm(integral - (X.values().back() - X.values().front())) <= 1e-12);
}

TEST_CASE("single pair on one step gives a (dX) a*") {
  Market market = test_market(32);
  AdaptedProcess X = market.process();
  Rng rng(33);
  AlgebraElement a = random_in_span(market.filtration->levels[0], rng);
  std::vector<std::vector<BiprocessPair>> steps(market.filtration->steps());
  steps[0].push_back({a, a.adjoint()});
  SimpleBiprocess H(market.filtration, std::move(steps));
  AlgebraElement expected = a * X.increment(0) * a.adjoint();
  CHECK(gns_norm(stochastic_integral(H, X) - expected) <= 1e-12);
}

TEST_CASE("empty pair lists integrate to zero") {
  Market market = test_market(34);
  SimpleBiprocess H(market.filtration,
                    std::vector<std::vector<BiprocessPair>>(market.filtration->steps()));
  CHECK(gns_norm(stochastic_integral(H, market.process())) == 0.0);
}

TEST_CASE("integral is bilinear in the biprocess and the process") {
  Market market = test_market(35);
  AdaptedProcess X = market.process();
  Rng rng(36);
  SimpleBiprocess H = random_biprocess(market.filtration, rng);
  SimpleBiprocess G = random_biprocess(market.filtration, rng);
  double alpha = 0.7, beta = -1.3;

  std::vector<std::vector<BiprocessPair>> mixed(market.filtration->steps());
  for (int k = 0; k < market.filtration->steps(); ++k) {
    for (const auto& p : H.steps()[k]) mixed[k].push_back({alpha * p.left, p.right});
    for (const auto& p : G.steps()[k]) mixed[k].push_back({beta * p.left, p.right});
  }
  AlgebraElement lhs = stochastic_integral(SimpleBiprocess(market.filtration, mixed), X);
  AlgebraElement rhs = alpha * stochastic_integral(H, X) + beta * stochastic_integral(G, X);
  CHECK(gns_norm(lhs - rhs) <= 1e-10);

  // linearity in X against a second process on the same filtration
  Market other = test_market(37);
  AdaptedProcess Y(market.filtration, other.process_values);
  std::vector<AlgebraElement> sum_values;
  for (std::size_t k = 0; k < X.values().size(); ++k)
    sum_values.push_back(X.values()[k] + Y.values()[k]);
  AdaptedProcess XY(market.filtration, sum_values);
  CHECK(gns_norm(stochastic_integral(H, XY) -
                 (stochastic_integral(H, X) + stochastic_integral(H, Y))) <= 1e-10);
}

TEST_CASE("decomposition independence") {
  Market market = test_market(38);
  AdaptedProcess X = market.process();
  Rng rng(39);
  AlgebraElement A = random_in_span(market.filtration->levels[0], rng);
  AlgebraElement B = random_in_span(market.filtration->levels[0], rng);

  std::vector<std::vector<BiprocessPair>> one(market.filtration->steps());
  one[0].push_back({A, B});
  std::vector<std::vector<BiprocessPair>> split(market.filtration->steps());
  split[0].push_back({0.5 * A, B});
  split[0].push_back({0.5 * A, B});
  AlgebraElement i1 = stochastic_integral(SimpleBiprocess(market.filtration, one), X);
  AlgebraElement i2 = stochastic_integral(SimpleBiprocess(market.filtration, split), X);
  CHECK(gns_norm(i1 - i2) == 0.0);  // exact halving, bit-identical sums

  // rotating a two-pair decomposition preserves the tensor, hence the integral
  AlgebraElement C = random_in_span(market.filtration->levels[0], rng);
  AlgebraElement D = random_in_span(market.filtration->levels[0], rng);
  double c = std::cos(0.71), s = std::sin(0.71);
  std::vector<std::vector<BiprocessPair>> plain(market.filtration->steps());
  plain[0] = {{A, B}, {C, D}};
  std::vector<std::vector<BiprocessPair>> rotated(market.filtration->steps());
  rotated[0] = {{c * A + s * C, c * B + s * D}, {-s * A + c * C, -s * B + c * D}};
  SimpleBiprocess Hp(market.filtration, plain), Hr(market.filtration, rotated);
  CHECK(kron_distance(Hp, Hr, 0) <= 1e-12);
  CHECK(gns_norm(stochastic_integral(Hp, X) - stochastic_integral(Hr, X)) <= 1e-10);
}

TEST_CASE("stopped integrals: windows, additivity, domain errors") {
  Market market = random_market(40, {2, 1, 2}, 3);
  AdaptedProcess X = market.process();
  Rng rng(41);
  SimpleBiprocess H = random_biprocess(market.filtration, rng);
  const auto& times = market.filtration->times;

  CHECK(gns_norm(stopped_integral(H, times[1], times[1], X)) == 0.0);
  CHECK(gns_norm(stopped_integral(H, times.front(), times.back(), X) -
                 stochastic_integral(H, X)) <= 1e-12);
  for (std::size_t split = 0; split < times.size(); ++split) {
    AlgebraElement lhs = stopped_integral(H, times.front(), times[split], X) +
                         stopped_integral(H, times[split], times.back(), X);
    CHECK(gns_norm(lhs - stochastic_integral(H, X)) <= 1e-10);
  }

  CHECK_THROWS_AS(stopped_integral(H, times[2], times[1], X), std::domain_error);
  CHECK_THROWS_AS(stopped_integral(H, 0.5, times.back(), X), std::domain_error);
}

TEST_CASE("biprocess adjoint") {
  Market market = test_market(42);
  AdaptedProcess X = market.process();
  Rng rng(43);
  SimpleBiprocess H = random_biprocess(market.filtration, rng);

  // pair mapping (A, B) -> (B*, A*)
  SimpleBiprocess Hs = biprocess_adjoint(H);
  const auto& p = H.steps()[0][0];
  const auto& q = Hs.steps()[0][0];
  CHECK(gns_norm(q.left - p.right.adjoint()) == 0.0);
  CHECK(gns_norm(q.right - p.left.adjoint()) == 0.0);

  // involution
  CHECK(kron_distance(biprocess_adjoint(Hs), H, 0) <= 1e-12);

  // adjoint of the integral is the integral of the adjoint
  for (int trial = 0; trial < 20; ++trial) {
    SimpleBiprocess G = random_biprocess(market.filtration, rng);
    AlgebraElement lhs = stochastic_integral(G, X).adjoint();
    AlgebraElement rhs = stochastic_integral(biprocess_adjoint(G), X);
    CHECK(gns_norm(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("strategy to biprocess") {
  Market market = test_market(44);
  AdaptedProcess X = market.process();
  const AlgebraPtr& alg = market.algebra;

  // {(1, I)} becomes {(I, I)}
  std::vector<std::vector<StrategyLeg>> steps(market.filtration->steps(),
                                              {StrategyLeg{1.0, AlgebraElement::identity(alg)}});
  SimpleBiprocess bi = strategy_to_biprocess(TradingStrategy(market.filtration, steps));
  CHECK(gns_norm(bi.steps()[0][0].left - AlgebraElement::identity(alg)) == 0.0);
  CHECK(gns_norm(bi.steps()[0][0].right - AlgebraElement::identity(alg)) == 0.0);

  // weight folding {(-2, a)} -> {(-2a, a*)}
  Rng rng(45);
  AlgebraElement a = random_in_span(market.filtration->levels[0], rng);
  std::vector<std::vector<StrategyLeg>> wsteps(market.filtration->steps());
  wsteps[0].push_back({-2.0, a});
  SimpleBiprocess wbi = strategy_to_biprocess(TradingStrategy(market.filtration, wsteps));
  CHECK(gns_norm(wbi.steps()[0][0].left - (-2.0) * a) == 0.0);
  CHECK(gns_norm(wbi.steps()[0][0].right - a.adjoint()) == 0.0);

  // strategy biprocesses are self-adjoint as tensors and give self-adjoint payoffs
  for (int trial = 0; trial < 20; ++trial) {
    TradingStrategy S = random_strategy(market.filtration, rng);
    SimpleBiprocess sb = strategy_to_biprocess(S);
    CHECK(kron_distance(biprocess_adjoint(sb), sb, 0) <= 1e-12);
    AlgebraElement payoff = stochastic_integral(S, X);
    CHECK(payoff.self_adjointness_residual() <= 1e-10);
  }
}

TEST_CASE("validate_adapted") {
  Market market = test_market(46);

  // constant process passes
  std::vector<AlgebraElement> constant(market.filtration->times.size(),
                                       AlgebraElement::identity(market.algebra));
  CHECK(validate_adapted(AdaptedProcess(market.filtration, constant)).pass());

  // generated market passes; also the quantum binomial
  CHECK(validate_adapted(market.process()).pass());
  QuantumBinomialSpec spec;
  spec.periods = 2;
  spec.basis_angles = {0.3, 0.9};
  Market qb = quantum_binomial(spec);
  CHECK(validate_adapted(qb.process()).pass());
  CHECK(validate_filtration(*qb.filtration).pass());

  // a value from a strictly larger level breaks adaptedness at step 1
  Rng rng(47);
  std::vector<AlgebraElement> broken = market.process_values;
  broken[1] = random_self_adjoint_in(market.filtration->levels[2], rng);
  ValidationReport report = validate_adapted(AdaptedProcess(market.filtration, broken));
  CHECK_FALSE(report.pass());
  CHECK(report.first_failure()->name.find("X[1]") != std::string::npos);

  // filtration mismatch is a structural error
  Market other = random_market(48, {2, 2}, 3);
  CHECK_THROWS_AS(
      stochastic_integral(identity_biprocess(other.filtration), market.process()),
      std::invalid_argument);
}

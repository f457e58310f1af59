#include <doctest.h>

#include "ncftap/ftap.hpp"
#include "ncftap/models.hpp"

using namespace ncftap;

TEST_CASE("embed_classical: one-period binomial values") {
  Market market = embed_classical(binomial_tree(1, 1.2, 0.9, 0.05));
  CHECK(market.algebra->block_dims() == std::vector<int>{2});
  CHECK(market.algebra->trace_weights()[0] == doctest::Approx(0.5));

  // X_0 = I, X_1 = diag(1.2, 0.9)/1.05
  CHECK(gns_norm(market.process_values[0] - AlgebraElement::identity(market.algebra)) == 0.0);
  const Matrix& x1 = market.process_values[1].block(0);
  CHECK(x1(0, 0).real() == doctest::Approx(1.2 / 1.05).epsilon(1e-15));
  CHECK(x1(1, 1).real() == doctest::Approx(0.9 / 1.05).epsilon(1e-15));

  CHECK(validate_filtration(*market.filtration).pass());
  CHECK(validate_adapted(market.process()).pass());
}

TEST_CASE("embed_classical: constant tree gives a constant process") {
  ClassicalTree tree;
  tree.rate = 0.0;
  tree.prices = {{1.0}, {1.0, 1.0}};
  tree.branch_factors = {{2}};
  Market market = embed_classical(tree);
  CHECK(gns_norm(market.process_values[1] - market.process_values[0]) == 0.0);
}

TEST_CASE("embed_classical: two-period partition structure") {
  Market market = embed_classical(binomial_tree(2, 1.1, 0.95, 0.0));
  REQUIRE(market.filtration->levels.size() == 3);
  CHECK(market.filtration->levels[0].dim() == 1);
  CHECK(market.filtration->levels[1].dim() == 2);  // constant on {1,2} and {3,4}
  CHECK(market.filtration->levels[2].dim() == 4);
  CHECK(validate_filtration(*market.filtration).pass());

  // level-1 basis vectors are constant on the first and second leaf pairs
  for (const AlgebraElement& b : market.filtration->levels[1].basis()) {
    const Matrix& d = b.block(0);
    CHECK(std::abs(d(0, 0) - d(1, 1)) <= 1e-15);
    CHECK(std::abs(d(2, 2) - d(3, 3)) <= 1e-15);
  }
  CHECK_THROWS_AS(embed_classical(binomial_tree(7, 1.1, 0.9, 0.0)), std::domain_error);
}

TEST_CASE("quantum_binomial: structure and validators") {
  QuantumBinomialSpec spec;
  spec.periods = 2;
  spec.up = 1.2;
  spec.down = 0.9;
  spec.rate = 0.05;
  spec.basis_angles = {0.4, 1.1};
  Market market = quantum_binomial(spec);
  CHECK(market.algebra->block_dims() == std::vector<int>{4});
  CHECK(market.filtration->levels[0].dim() == 1);
  CHECK(market.filtration->levels[1].dim() == 4);
  CHECK(market.filtration->levels[2].dim() == 16);
  CHECK(validate_filtration(*market.filtration).pass());
  CHECK(validate_adapted(market.process()).pass());

  // spectra are the classical discounted prices, regardless of the angles
  Eigen::SelfAdjointEigenSolver<Matrix> es(market.process_values[2].block(0));
  std::vector<double> expected{0.9 * 0.9, 0.9 * 1.2, 1.2 * 0.9, 1.2 * 1.2};
  for (double& e : expected) e /= 1.05 * 1.05;
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 4; ++i)
    CHECK(es.eigenvalues()(i) == doctest::Approx(expected[i]).epsilon(1e-12));

  QuantumBinomialSpec bad = spec;
  bad.periods = 9;
  CHECK_THROWS_AS(quantum_binomial(bad), std::domain_error);
  bad = spec;
  bad.down = 1.3;
  CHECK_THROWS_AS(quantum_binomial(bad), std::invalid_argument);
}

TEST_CASE("quantum_binomial angle 0 matches the classical embedding verdict") {
  const double grid[][3] = {{1.2, 0.9, 0.05}, {1.1, 0.95, 0.0}, {1.1, 1.05, 0.0},
                            {1.3, 0.8, 0.1},  {0.95, 0.8, 0.0}};
  for (auto [u, d, r] : grid) {
    for (int periods : {1, 2}) {
      QuantumBinomialSpec spec;
      spec.periods = periods;
      spec.up = u;
      spec.down = d;
      spec.rate = r;
      Verdict quantum = check_nfl(quantum_binomial(spec).process());
      Verdict classical = check_nfl(embed_classical(binomial_tree(periods, u, d, r)).process());
      ClassicalVerdict oracle = classical_oracle(binomial_tree(periods, u, d, r));
      CHECK(quantum.outcome == classical.outcome);
      CHECK((quantum.outcome == Outcome::kEms) == oracle.ems);
    }
  }
}

TEST_CASE("quantum_binomial verdicts are invariant under basis rotations") {
  for (double angle : {0.0, 0.3, 0.7, 1.2}) {
    QuantumBinomialSpec ems_spec;
    ems_spec.periods = 1;
    ems_spec.up = 1.2;
    ems_spec.down = 0.9;
    ems_spec.rate = 0.05;
    ems_spec.basis_angles = {angle};
    CHECK(check_nfl(quantum_binomial(ems_spec).process()).outcome == Outcome::kEms);

    QuantumBinomialSpec arb_spec = ems_spec;
    arb_spec.up = 1.1;
    arb_spec.down = 1.05;
    arb_spec.rate = 0.0;
    CHECK(check_nfl(quantum_binomial(arb_spec).process()).outcome == Outcome::kArbitrage);
  }
}

TEST_CASE("random_market determinism and validity") {
  Market a = random_market(99, {2, 3}, 3);
  Market b = random_market(99, {2, 3}, 3);
  REQUIRE(a.process_values.size() == b.process_values.size());
  for (std::size_t k = 0; k < a.process_values.size(); ++k)
    CHECK(gns_norm(a.process_values[k] - b.process_values[k]) == 0.0);
  for (std::size_t k = 0; k < a.filtration->levels.size(); ++k) {
    REQUIRE(a.filtration->levels[k].dim() == b.filtration->levels[k].dim());
    for (int i = 0; i < a.filtration->levels[k].dim(); ++i)
      CHECK(gns_norm(a.filtration->levels[k].basis()[i] - b.filtration->levels[k].basis()[i]) ==
            0.0);
  }

  for (std::uint64_t seed : {1ull, 17ull, 2026ull}) {
    Market m = random_market(seed, {2, 2}, 2);
    CHECK(validate_filtration(*m.filtration).pass());
    CHECK(validate_adapted(m.process()).pass());
    CHECK(m.filtration->levels.back().dim() == m.algebra->element_dim());  // top level full
  }
  CHECK_THROWS_AS(random_market(1, {33, 33}, 2), std::domain_error);
}

#include "ncftap/models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ncftap {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<double> filtration_times(int periods) {
  std::vector<double> t(periods + 1);
  std::iota(t.begin(), t.end(), 0);
  return t;
}

}  // namespace

Market embed_classical(const ClassicalTree& tree) {
  validate_tree(tree);
  const int L = tree.leaf_count();
  if (L > 64) throw std::domain_error("embed_classical: tree exceeds 64 leaves");
  const int m = tree.periods();
  auto node_of_leaf = tree_node_of_leaf(tree);

  Market market;
  market.algebra =
      std::make_shared<MultiMatrixAlgebra>(std::vector<int>{L}, std::vector<double>{1.0 / L});

  auto filtration = std::make_shared<Filtration>();
  filtration->times = filtration_times(m);
  for (int k = 0; k <= m; ++k) {
    const int nodes = static_cast<int>(tree.prices[k].size());
    std::vector<AlgebraElement> basis, generators;
    for (int node = 0; node < nodes; ++node) {
      Matrix indicator = Matrix::Zero(L, L);
      int size = 0;
      for (int leaf = 0; leaf < L; ++leaf)
        if (node_of_leaf[k][leaf] == node) {
          indicator(leaf, leaf) = Complex(1.0, 0.0);
          ++size;
        }
      generators.emplace_back(market.algebra, std::vector<Matrix>{indicator});
      // ||1_C||_2^2 = |C| / L
      basis.emplace_back(market.algebra,
                         std::vector<Matrix>{std::sqrt(static_cast<double>(L) / size) * indicator});
    }
    filtration->levels.push_back(
        Subalgebra::from_orthonormal_basis_unchecked(market.algebra, std::move(basis)));
    market.level_generators.push_back(std::move(generators));
  }
  market.filtration = filtration;

  for (int k = 0; k <= m; ++k) {
    double disc = std::pow(1.0 + tree.rate, k);
    Matrix x = Matrix::Zero(L, L);
    for (int leaf = 0; leaf < L; ++leaf)
      x(leaf, leaf) = Complex(tree.prices[k][node_of_leaf[k][leaf]] / disc, 0.0);
    market.process_values.emplace_back(market.algebra, std::vector<Matrix>{x});
  }
  return market;
}

Market quantum_binomial(const QuantumBinomialSpec& spec) {
  if (spec.periods < 1) throw std::invalid_argument("quantum_binomial needs >= 1 period");
  if (spec.periods > 8) throw std::domain_error("quantum_binomial: periods capped at 8");
  if (!(spec.down < spec.up)) throw std::invalid_argument("quantum_binomial needs d < u");
  if (!(spec.down > 0.0)) throw std::invalid_argument("quantum_binomial needs positive prices");
  if (spec.rate < 0.0) throw std::invalid_argument("quantum_binomial needs rate >= 0");
  const int m = spec.periods;
  std::vector<double> angles = spec.basis_angles;
  if (angles.empty()) angles.assign(m, 0.0);
  if (angles.size() == 1 && m > 1) angles.assign(m, angles[0]);
  if (static_cast<int>(angles.size()) != m)
    throw std::invalid_argument("quantum_binomial needs one basis angle per period");

  const int dim = 1 << m;
  Market market;
  market.algebra = std::make_shared<MultiMatrixAlgebra>(std::vector<int>{dim});

  // Pauli kron products are GNS-orthonormal under the normalized trace.
  const Matrix pauli[4] = {
      (Matrix(2, 2) << 1, 0, 0, 1).finished(),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished()};

  auto filtration = std::make_shared<Filtration>();
  filtration->times = filtration_times(m);
  for (int k = 0; k <= m; ++k) {
    std::vector<AlgebraElement> basis;
    const int count = 1 << (2 * k);  // 4^k words over the first k slots
    for (int word = 0; word < count; ++word) {
      Matrix b = Matrix::Identity(1, 1);
      int w = word;
      for (int slot = 0; slot < k; ++slot) {
        b = kron(b, pauli[w & 3]);
        w >>= 2;
      }
      b = kron(b, Matrix::Identity(dim >> k, dim >> k));
      basis.emplace_back(market.algebra, std::vector<Matrix>{std::move(b)});
    }
    filtration->levels.push_back(
        Subalgebra::from_orthonormal_basis_unchecked(market.algebra, std::move(basis)));

    // ladder generators per occupied slot, enough to regenerate the level
    std::vector<AlgebraElement> generators;
    Matrix e12 = Matrix::Zero(2, 2);
    e12(0, 1) = Complex(1.0, 0.0);
    for (int slot = 0; slot < k; ++slot) {
      Matrix g = Matrix::Identity(1, 1);
      for (int s = 0; s < m; ++s) g = kron(g, s == slot ? e12 : Matrix::Identity(2, 2));
      generators.emplace_back(market.algebra, std::vector<Matrix>{std::move(g)});
    }
    market.level_generators.push_back(std::move(generators));
  }
  market.filtration = filtration;

  std::vector<Matrix> factors;
  for (int j = 0; j < m; ++j) {
    Matrix rot(2, 2);
    rot << std::cos(angles[j]), -std::sin(angles[j]), std::sin(angles[j]), std::cos(angles[j]);
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = spec.up;
    diag(1, 1) = spec.down;
    factors.push_back(rot * diag * rot.adjoint());
  }
  for (int k = 0; k <= m; ++k) {
    Matrix x = Matrix::Identity(1, 1);
    for (int j = 0; j < k; ++j) x = kron(x, factors[j]);
    x = kron(x, Matrix::Identity(dim >> k, dim >> k));
    x /= std::pow(1.0 + spec.rate, k);
    market.process_values.emplace_back(market.algebra, std::vector<Matrix>{std::move(x)});
  }
  return market;
}

namespace {

// random unitary per block via QR of a complex gaussian matrix
Matrix haar_unitary(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

using Partition = std::vector<int>;  // part sizes, summing to the block dim

Partition refine_partition(const Partition& coarse, Rng& rng) {
  Partition fine;
  for (int part : coarse) {
    if (part >= 2 && rng.uniform() < 0.6) {
      int cut = rng.uniform_int(1, part - 1);
      fine.push_back(cut);
      fine.push_back(part - cut);
    } else {
      fine.push_back(part);
    }
  }
  return fine;
}

}  // namespace

Market random_market(std::uint64_t seed, const std::vector<int>& block_dims, int periods) {
  int total = 0;
  for (int n : block_dims) total += n;
  if (total > 64) throw std::domain_error("random_market: total dimension capped at 64");
  if (periods < 1) throw std::invalid_argument("random_market needs >= 1 period");

  Rng rng(seed);
  Market market;
  market.algebra = std::make_shared<MultiMatrixAlgebra>(block_dims);
  const int blocks = market.algebra->block_count();

  std::vector<Matrix> conj(blocks);
  for (int b = 0; b < blocks; ++b) conj[b] = haar_unitary(block_dims[b], rng);

  // coarsening partition chains, finest at level 1, the whole block at the top
  std::vector<std::vector<Partition>> chain(blocks);
  for (int b = 0; b < blocks; ++b) {
    chain[b].resize(periods + 1);
    chain[b][periods] = {block_dims[b]};
    for (int k = periods - 1; k >= 1; --k) chain[b][k] = refine_partition(chain[b][k + 1], rng);
  }

  auto filtration = std::make_shared<Filtration>();
  filtration->times = filtration_times(periods);
  filtration->levels.push_back(Subalgebra::span_identity(market.algebra));
  market.level_generators.push_back({});
  const auto& w = market.algebra->trace_weights();
  for (int k = 1; k <= periods; ++k) {
    std::vector<AlgebraElement> basis;
    for (int b = 0; b < blocks; ++b) {
      double scale = 1.0 / std::sqrt(w[b]);
      int lo = 0;
      for (int part : chain[b][k]) {
        for (int i = lo; i < lo + part; ++i)
          for (int j = lo; j < lo + part; ++j) {
            AlgebraElement e = AlgebraElement::zero(market.algebra);
            std::vector<Matrix> mats = e.blocks();
            // U e_ij U^* stays GNS-orthonormal under conjugation
            mats[b] = scale * (conj[b].col(i) * conj[b].col(j).adjoint());
            basis.emplace_back(market.algebra, std::move(mats));
          }
        lo += part;
      }
    }
    market.level_generators.push_back(basis);
    filtration->levels.push_back(
        Subalgebra::from_orthonormal_basis_unchecked(market.algebra, std::move(basis)));
  }
  market.filtration = filtration;

  // Increment modes keep the verdict mix healthy: fully centered increments
  // make tau a faithful martingale state, raw ones lean toward arbitrage.
  AlgebraElement x = AlgebraElement::identity(market.algebra);
  market.process_values.push_back(x);
  for (int k = 0; k < periods; ++k) {
    AlgebraElement dx = random_self_adjoint_in(filtration->levels[k + 1], rng);
    double mode = rng.uniform();
    if (mode < 0.45) {
      dx -= conditional_expectation(dx, filtration->levels[k]);
    } else if (mode < 0.7) {
      dx -= rng.uniform(0.5, 1.5) * conditional_expectation(dx, filtration->levels[k]);
    }
    x += dx;
    market.process_values.push_back(x);
  }
  return market;
}

AlgebraElement random_element(const AlgebraPtr& algebra, Rng& rng) {
  std::vector<Matrix> blocks;
  for (int n : algebra->block_dims()) {
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = rng.cnormal();
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement random_self_adjoint(const AlgebraPtr& algebra, Rng& rng) {
  return random_element(algebra, rng).hermitian_part();
}

AlgebraElement random_in_span(const Subalgebra& sub, Rng& rng) {
  AlgebraElement x = AlgebraElement::zero(sub.algebra());
  double scale = 1.0 / std::sqrt(static_cast<double>(sub.dim()));
  for (const AlgebraElement& b : sub.basis()) x += (scale * rng.cnormal()) * b;
  return x;
}

AlgebraElement random_self_adjoint_in(const Subalgebra& sub, Rng& rng) {
  return random_in_span(sub, rng).hermitian_part();
}

State random_faithful_state(const AlgebraPtr& algebra, Rng& rng) {
  AlgebraElement g = random_element(algebra, rng);
  AlgebraElement rho = g * g.adjoint() + 0.3 * AlgebraElement::identity(algebra);
  rho *= Complex(1.0 / trace(rho).real(), 0.0);
  return State(rho.hermitian_part());
}

TradingStrategy random_strategy(const FiltrationPtr& filtration, Rng& rng, int max_legs) {
  std::vector<std::vector<StrategyLeg>> steps(filtration->steps());
  for (int k = 0; k < filtration->steps(); ++k) {
    int legs = rng.uniform_int(1, max_legs);
    for (int j = 0; j < legs; ++j)
      steps[k].push_back({rng.normal(), random_in_span(filtration->levels[k], rng)});
  }
  return TradingStrategy(filtration, std::move(steps));
}

SimpleBiprocess random_biprocess(const FiltrationPtr& filtration, Rng& rng, int max_pairs) {
  std::vector<std::vector<BiprocessPair>> steps(filtration->steps());
  for (int k = 0; k < filtration->steps(); ++k) {
    int pairs = rng.uniform_int(1, max_pairs);
    for (int j = 0; j < pairs; ++j)
      steps[k].push_back({random_in_span(filtration->levels[k], rng),
                          random_in_span(filtration->levels[k], rng)});
  }
  return SimpleBiprocess(filtration, std::move(steps));
}

}  // namespace ncftap

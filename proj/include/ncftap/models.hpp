#pragma once

#include "ncftap/classical.hpp"
#include "ncftap/martingale.hpp"
#include "ncftap/rng.hpp"

namespace ncftap {

/// A generated market instance: algebra, filtration, price process values,
/// and the per-level generator lists used when the instance is serialized.
struct Market {
  AlgebraPtr algebra;
  FiltrationPtr filtration;
  std::vector<AlgebraElement> process_values;
  std::vector<std::vector<AlgebraElement>> level_generators;

  AdaptedProcess process() const { return AdaptedProcess(filtration, process_values); }
};

/// Diagonal embedding of a classical tree: a single block of dimension
/// #leaves with uniform weights, levels spanned by the indicators of depth-k
/// node classes, process equal to the discounted prices on the diagonal.
/// Throws std::domain_error when the tree has more than 64 leaves.
Market embed_classical(const ClassicalTree& tree);

struct QuantumBinomialSpec {
  int periods = 1;
  double up = 1.2;
  double down = 0.9;
  double rate = 0.0;
  /// Bloch rotation of the measurement basis per period, relative to the
  /// computational basis.  Empty means all zero; a single entry broadcasts.
  std::vector<double> basis_angles;
};

/// Tensor-product binomial market on M_{2^periods} with uniform trace:
/// level k is the full 2x2 algebra on the first k slots, and
/// X_k = (F_1 x ... x F_k x I) / (1+r)^k with F_j = R(angle_j) diag(u,d)
/// R(angle_j)*.  Angle zero is verdict-equivalent to the classical
/// embedding; any angle has the same spectra.  Periods are capped at 8.
Market quantum_binomial(const QuantumBinomialSpec& spec);

/// Seeded random market: nested random subalgebra chain (level 0 = span{I},
/// top level the full algebra), increments drawn self-adjoint from the next
/// level.  Total dimension is capped at 64.
Market random_market(std::uint64_t seed, const std::vector<int>& block_dims, int periods);

// Deterministic sampling helpers shared by the generators and the test
// harnesses; all consume the supplied stream only.
AlgebraElement random_element(const AlgebraPtr& algebra, Rng& rng);
AlgebraElement random_self_adjoint(const AlgebraPtr& algebra, Rng& rng);
AlgebraElement random_in_span(const Subalgebra& sub, Rng& rng);
AlgebraElement random_self_adjoint_in(const Subalgebra& sub, Rng& rng);
State random_faithful_state(const AlgebraPtr& algebra, Rng& rng);
TradingStrategy random_strategy(const FiltrationPtr& filtration, Rng& rng, int max_legs = 3);
SimpleBiprocess random_biprocess(const FiltrationPtr& filtration, Rng& rng, int max_pairs = 3);

}  // namespace ncftap

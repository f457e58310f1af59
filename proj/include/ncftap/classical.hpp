#pragma once

#include <string>
#include <vector>

namespace ncftap {

/// A finite multi-period market tree.  Nodes live in per-level lists; the
/// children of node i at level k are consecutive at level k+1.
struct ClassicalTree {
  double rate = 0.0;
  std::vector<std::vector<double>> prices;       // [level][node], all > 0
  std::vector<std::vector<int>> branch_factors;  // [level][node], one list per period

  int periods() const { return static_cast<int>(prices.size()) - 1; }
  int leaf_count() const { return static_cast<int>(prices.back().size()); }
};

/// Throws std::invalid_argument on inconsistent arity or non-positive prices.
void validate_tree(const ClassicalTree& tree);

/// Non-recombining binomial tree with node price s0 * u^{#up} * d^{#down}.
ClassicalTree binomial_tree(int periods, double u, double d, double r, double s0 = 1.0);

/// leaf -> ancestor node index per level, leaves in depth-first order.
std::vector<std::vector<int>> tree_node_of_leaf(const ClassicalTree& tree);

struct ClassicalVerdict {
  bool ems = false;
  std::vector<double> leaf_measure;  // strictly positive martingale measure when ems
  std::string violation;             // first failing node otherwise
};

/// Commutative ground truth: a strictly positive one-step measure exists at a
/// node iff its discounted price lies strictly inside the children's range
/// (or all child prices are equal).  The leaf measure is the product of
/// per-node conditionals, with the min-probability maximized at branching
/// nodes that leave a degree of freedom.  Throws std::domain_error beyond
/// desk scale (> 4 periods or > 3 branches per node).
ClassicalVerdict classical_oracle(const ClassicalTree& tree);

}  // namespace ncftap

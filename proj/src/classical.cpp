#include "ncftap/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncftap {

void validate_tree(const ClassicalTree& tree) {
  if (tree.prices.empty()) throw std::invalid_argument("tree has no levels");
  if (tree.branch_factors.size() + 1 != tree.prices.size())
    throw std::invalid_argument("tree needs one branch-factor list per period");
  if (tree.prices.front().size() != 1) throw std::invalid_argument("tree needs a single root");
  if (!(tree.rate > -1.0)) throw std::invalid_argument("rate must exceed -1");
  for (const auto& level : tree.prices)
    for (double p : level)
      if (!(p > 0.0)) throw std::invalid_argument("tree prices must be positive");
  for (std::size_t k = 0; k < tree.branch_factors.size(); ++k) {
    if (tree.branch_factors[k].size() != tree.prices[k].size())
      throw std::invalid_argument("branch factors must match node count");
    int total = 0;
    for (int b : tree.branch_factors[k]) {
      if (b < 1) throw std::invalid_argument("branch factors must be >= 1");
      total += b;
    }
    if (total != static_cast<int>(tree.prices[k + 1].size()))
      throw std::invalid_argument("tree arity inconsistent at level " + std::to_string(k));
  }
}

ClassicalTree binomial_tree(int periods, double u, double d, double r, double s0) {
  if (periods < 1) throw std::invalid_argument("binomial tree needs >= 1 period");
  if (!(d < u)) throw std::invalid_argument("binomial tree needs d < u");
  if (!(d > 0.0) || !(s0 > 0.0)) throw std::invalid_argument("prices must be positive");
  ClassicalTree tree;
  tree.rate = r;
  tree.prices.push_back({s0});
  for (int k = 0; k < periods; ++k) {
    tree.branch_factors.push_back(std::vector<int>(tree.prices[k].size(), 2));
    std::vector<double> next;
    next.reserve(2 * tree.prices[k].size());
    for (double p : tree.prices[k]) {
      next.push_back(p * u);
      next.push_back(p * d);
    }
    tree.prices.push_back(std::move(next));
  }
  return tree;
}

std::vector<std::vector<int>> tree_node_of_leaf(const ClassicalTree& tree) {
  validate_tree(tree);
  const int m = tree.periods();
  // subtree leaf counts, bottom-up
  std::vector<std::vector<int>> leaves_below(m + 1);
  leaves_below[m] = std::vector<int>(tree.prices[m].size(), 1);
  for (int k = m - 1; k >= 0; --k) {
    leaves_below[k].resize(tree.prices[k].size());
    int child = 0;
    for (std::size_t i = 0; i < tree.prices[k].size(); ++i) {
      int total = 0;
      for (int b = 0; b < tree.branch_factors[k][i]; ++b) total += leaves_below[k + 1][child++];
      leaves_below[k][i] = total;
    }
  }
  std::vector<std::vector<int>> node_of_leaf(m + 1, std::vector<int>(tree.leaf_count()));
  for (int k = 0; k <= m; ++k) {
    int leaf = 0;
    for (std::size_t i = 0; i < tree.prices[k].size(); ++i)
      for (int c = 0; c < leaves_below[k][i]; ++c) node_of_leaf[k][leaf++] = static_cast<int>(i);
  }
  return node_of_leaf;
}

namespace {

// max-min-probability solution of sum p_b = 1, sum p_b x_b = x over the
// simplex; empty when no strictly positive solution exists.
std::vector<double> node_measure(const std::vector<double>& x, double target) {
  const int n = static_cast<int>(x.size());
  const double scale = std::abs(target) + 1.0;
  const double eps = 1e-12 * scale;
  double lo = *std::min_element(x.begin(), x.end());
  double hi = *std::max_element(x.begin(), x.end());
  if (hi - lo <= eps) {
    // degenerate node: feasible iff the target matches the common value
    if (std::abs(x[0] - target) > eps) return {};
    return std::vector<double>(n, 1.0 / n);
  }
  if (!(target > lo + eps) || !(target < hi - eps)) return {};
  if (n == 1) return {};  // single unequal child cannot match
  if (n == 2) {
    double q = (target - x[1]) / (x[0] - x[1]);
    return {q, 1.0 - q};
  }
  // n == 3: one degree of freedom left after the two equations.  Take
  // s = p_2 and grid-search the segment for the max-min-probability point.
  if (std::abs(x[0] - x[1]) <= eps) {
    if (std::abs(x[2] - x[0]) <= eps) return {};  // covered above, defensive
    double s = (target - x[0]) / (x[2] - x[0]);
    if (!(s > 0.0) || !(s < 1.0)) return {};
    return {0.5 * (1.0 - s), 0.5 * (1.0 - s), s};
  }
  std::vector<double> best;
  double best_min = 0.0;
  const int grid = 20000;
  for (int g = 0; g <= grid; ++g) {
    double s = static_cast<double>(g) / grid;
    double p0 = ((target - s * x[2]) - x[1] * (1.0 - s)) / (x[0] - x[1]);
    double p1 = (1.0 - s) - p0;
    double mn = std::min({p0, p1, s});
    if (mn > best_min) {
      best_min = mn;
      best = {p0, p1, s};
    }
  }
  return best;  // empty when no grid point is strictly positive
}

}  // namespace

ClassicalVerdict classical_oracle(const ClassicalTree& tree) {
  validate_tree(tree);
  if (tree.periods() > 4) throw std::domain_error("classical_oracle: > 4 periods");
  for (const auto& level : tree.branch_factors)
    for (int b : level)
      if (b > 3) throw std::domain_error("classical_oracle: > 3 branches per node");

  ClassicalVerdict verdict;
  const int m = tree.periods();
  // conditional measures per node
  std::vector<std::vector<std::vector<double>>> cond(m);
  std::vector<int> child_start;
  for (int k = 0; k < m; ++k) {
    cond[k].resize(tree.prices[k].size());
    int child = 0;
    double disc_k = std::pow(1.0 + tree.rate, k);
    double disc_k1 = std::pow(1.0 + tree.rate, k + 1);
    for (std::size_t i = 0; i < tree.prices[k].size(); ++i) {
      std::vector<double> xs;
      for (int b = 0; b < tree.branch_factors[k][i]; ++b)
        xs.push_back(tree.prices[k + 1][child++] / disc_k1);
      std::vector<double> q = node_measure(xs, tree.prices[k][i] / disc_k);
      if (q.empty()) {
        verdict.ems = false;
        verdict.violation = "node " + std::to_string(i) + " at level " + std::to_string(k);
        return verdict;
      }
      cond[k][i] = std::move(q);
    }
  }
  verdict.ems = true;
  // leaf measure = product of conditionals along the path
  std::vector<double> level_measure{1.0};
  for (int k = 0; k < m; ++k) {
    std::vector<double> next;
    for (std::size_t i = 0; i < tree.prices[k].size(); ++i)
      for (double q : cond[k][i]) next.push_back(level_measure[i] * q);
    level_measure = std::move(next);
  }
  verdict.leaf_measure = std::move(level_measure);
  return verdict;
}

}  // namespace ncftap

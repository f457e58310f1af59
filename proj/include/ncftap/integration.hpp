#pragma once

#include <vector>

#include "ncftap/subalgebra.hpp"

namespace ncftap {

/// A self-adjoint process adapted to a filtration: one value per grid time.
class AdaptedProcess {
 public:
  AdaptedProcess(FiltrationPtr filtration, std::vector<AlgebraElement> values);

  const FiltrationPtr& filtration() const { return filtration_; }
  const std::vector<AlgebraElement>& values() const { return values_; }
  const AlgebraElement& value(int k) const { return values_[k]; }
  int steps() const { return static_cast<int>(values_.size()) - 1; }
  /// X_{t_{k+1}} - X_{t_k}
  AlgebraElement increment(int step) const;

 private:
  FiltrationPtr filtration_;
  std::vector<AlgebraElement> values_;
};

struct BiprocessPair {
  AlgebraElement left;   // A_j
  AlgebraElement right;  // B_j
};

/// Piecewise-constant biprocess H_t = sum_j A_j x B_j on each grid interval,
/// stored as explicit pair lists (no canonical decomposition is computed).
class SimpleBiprocess {
 public:
  SimpleBiprocess(FiltrationPtr filtration, std::vector<std::vector<BiprocessPair>> steps);

  const FiltrationPtr& filtration() const { return filtration_; }
  const std::vector<std::vector<BiprocessPair>>& steps() const { return steps_; }
  int step_count() const { return static_cast<int>(steps_.size()); }

 private:
  FiltrationPtr filtration_;
  std::vector<std::vector<BiprocessPair>> steps_;
};

struct StrategyLeg {
  double weight;           // alpha_j, real (may be negative)
  AlgebraElement element;  // a_j
};

/// A trading strategy: per step, a real combination sum_j alpha_j a_j x a_j*.
class TradingStrategy {
 public:
  TradingStrategy(FiltrationPtr filtration, std::vector<std::vector<StrategyLeg>> steps);

  const FiltrationPtr& filtration() const { return filtration_; }
  const std::vector<std::vector<StrategyLeg>>& steps() const { return steps_; }
  int step_count() const { return static_cast<int>(steps_.size()); }

 private:
  FiltrationPtr filtration_;
  std::vector<std::vector<StrategyLeg>> steps_;
};

/// sum_k sum_j A_{j,k} (X_{t_{k+1}} - X_{t_k}) B_{j,k}.
AlgebraElement stochastic_integral(const SimpleBiprocess& H, const AdaptedProcess& X);
AlgebraElement stochastic_integral(const TradingStrategy& S, const AdaptedProcess& X);

/// Integral of H restricted to the window [s, t); s and t must be grid times.
AlgebraElement stopped_integral(const SimpleBiprocess& H, double s, double t,
                                const AdaptedProcess& X);

/// (sum_j A_j x B_j)* = sum_j B_j* x A_j*, per step.
SimpleBiprocess biprocess_adjoint(const SimpleBiprocess& H);

/// Fold the real weight into the left leg: (alpha, a) -> (alpha a, a*).
SimpleBiprocess strategy_to_biprocess(const TradingStrategy& S);

ValidationReport validate_adapted(const AdaptedProcess& X, double tol = kDefaultTol);
ValidationReport validate_adapted(const SimpleBiprocess& H, double tol = kDefaultTol);
ValidationReport validate_adapted(const TradingStrategy& S, double tol = kDefaultTol);

}  // namespace ncftap

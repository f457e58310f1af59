#include "ncftap/integration.hpp"

#include <stdexcept>

namespace ncftap {

namespace {

bool same_filtration(const FiltrationPtr& a, const FiltrationPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->times != b->times) return false;
  if (!a->algebra()->same_as(*b->algebra())) return false;
  if (a->levels.size() != b->levels.size()) return false;
  for (std::size_t k = 0; k < a->levels.size(); ++k)
    if (a->levels[k].dim() != b->levels[k].dim()) return false;
  return true;
}

void ensure_same_filtration(const FiltrationPtr& a, const FiltrationPtr& b) {
  if (!same_filtration(a, b))
    throw std::invalid_argument("objects are attached to different filtrations");
}

}  // namespace

AdaptedProcess::AdaptedProcess(FiltrationPtr filtration, std::vector<AlgebraElement> values)
    : filtration_(std::move(filtration)), values_(std::move(values)) {
  if (!filtration_) throw std::invalid_argument("process needs a filtration");
  if (values_.size() != filtration_->times.size())
    throw std::invalid_argument("process needs one value per filtration time");
  for (const AlgebraElement& v : values_)
    if (!v.algebra()->same_as(*filtration_->algebra()))
      throw std::invalid_argument("process value outside the filtration's algebra");
}

AlgebraElement AdaptedProcess::increment(int step) const {
  return values_[step + 1] - values_[step];
}

SimpleBiprocess::SimpleBiprocess(FiltrationPtr filtration,
                                 std::vector<std::vector<BiprocessPair>> steps)
    : filtration_(std::move(filtration)), steps_(std::move(steps)) {
  if (!filtration_) throw std::invalid_argument("biprocess needs a filtration");
  if (static_cast<int>(steps_.size()) != filtration_->steps())
    throw std::invalid_argument("biprocess needs one pair list per grid interval");
}

TradingStrategy::TradingStrategy(FiltrationPtr filtration,
                                 std::vector<std::vector<StrategyLeg>> steps)
    : filtration_(std::move(filtration)), steps_(std::move(steps)) {
  if (!filtration_) throw std::invalid_argument("strategy needs a filtration");
  if (static_cast<int>(steps_.size()) != filtration_->steps())
    throw std::invalid_argument("strategy needs one leg list per grid interval");
}

AlgebraElement stochastic_integral(const SimpleBiprocess& H, const AdaptedProcess& X) {
  ensure_same_filtration(H.filtration(), X.filtration());
  AlgebraElement acc = AlgebraElement::zero(X.filtration()->algebra());
  for (int k = 0; k < H.step_count(); ++k) {
    AlgebraElement dx = X.increment(k);
    for (const BiprocessPair& p : H.steps()[k]) acc += p.left * dx * p.right;
  }
  return acc;
}

AlgebraElement stochastic_integral(const TradingStrategy& S, const AdaptedProcess& X) {
  return stochastic_integral(strategy_to_biprocess(S), X);
}

AlgebraElement stopped_integral(const SimpleBiprocess& H, double s, double t,
                                const AdaptedProcess& X) {
  ensure_same_filtration(H.filtration(), X.filtration());
  const Filtration& f = *H.filtration();
  auto is = f.index_of_time(s);
  auto it = f.index_of_time(t);
  if (!is || !it) throw std::domain_error("stopped_integral: time off the grid");
  if (*is > *it) throw std::domain_error("stopped_integral requires s <= t");
  AlgebraElement acc = AlgebraElement::zero(f.algebra());
  for (int k = *is; k < *it; ++k) {
    AlgebraElement dx = X.increment(k);
    for (const BiprocessPair& p : H.steps()[k]) acc += p.left * dx * p.right;
  }
  return acc;
}

SimpleBiprocess biprocess_adjoint(const SimpleBiprocess& H) {
  std::vector<std::vector<BiprocessPair>> steps;
  steps.reserve(H.steps().size());
  for (const auto& step : H.steps()) {
    std::vector<BiprocessPair> out;
    out.reserve(step.size());
    for (const BiprocessPair& p : step) out.push_back({p.right.adjoint(), p.left.adjoint()});
    steps.push_back(std::move(out));
  }
  return SimpleBiprocess(H.filtration(), std::move(steps));
}

SimpleBiprocess strategy_to_biprocess(const TradingStrategy& S) {
  std::vector<std::vector<BiprocessPair>> steps;
  steps.reserve(S.steps().size());
  for (const auto& step : S.steps()) {
    std::vector<BiprocessPair> out;
    out.reserve(step.size());
    for (const StrategyLeg& leg : step)
      out.push_back({leg.weight * leg.element, leg.element.adjoint()});
    steps.push_back(std::move(out));
  }
  return SimpleBiprocess(S.filtration(), std::move(steps));
}

ValidationReport validate_adapted(const AdaptedProcess& X, double tol) {
  ValidationReport report;
  const Filtration& f = *X.filtration();
  for (std::size_t k = 0; k < X.values().size(); ++k) {
    const AlgebraElement& x = X.values()[k];
    report.add("X[" + std::to_string(k) + "] self-adjoint", x.self_adjointness_residual(), tol);
    report.add("X[" + std::to_string(k) + "] in level " + std::to_string(k),
               f.levels[k].span_residual(x), tol);
  }
  return report;
}

ValidationReport validate_adapted(const SimpleBiprocess& H, double tol) {
  ValidationReport report;
  const Filtration& f = *H.filtration();
  for (int k = 0; k < H.step_count(); ++k) {
    double worst = 0.0;
    for (const BiprocessPair& p : H.steps()[k]) {
      worst = std::max(worst, f.levels[k].span_residual(p.left));
      worst = std::max(worst, f.levels[k].span_residual(p.right));
    }
    report.add("step " + std::to_string(k) + " legs in level " + std::to_string(k), worst, tol);
  }
  return report;
}

ValidationReport validate_adapted(const TradingStrategy& S, double tol) {
  ValidationReport report;
  const Filtration& f = *S.filtration();
  for (int k = 0; k < S.step_count(); ++k) {
    double worst = 0.0;
    for (const StrategyLeg& leg : S.steps()[k])
      worst = std::max(worst, f.levels[k].span_residual(leg.element));
    report.add("step " + std::to_string(k) + " legs in level " + std::to_string(k), worst, tol);
  }
  return report;
}

}  // namespace ncftap

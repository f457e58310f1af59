#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "ncftap/models.hpp"

namespace ncftap {

using Json = nlohmann::ordered_json;

/// Raised for malformed documents; message carries the offending JSON path.
struct MarketParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedMarket {
  Market market;
  ValidationReport filtration_report;
  ValidationReport process_report;
  bool valid() const { return filtration_report.pass() && process_report.pass(); }
};

/// Parses the self-describing market document: algebra (block_dims,
/// trace_weights), filtration (times, per-level generator matrices), process
/// (per-time matrices).  Structure errors throw MarketParseError; residual
/// failures land in the attached validation reports.
ParsedMarket parse_market(const std::string& text, double tol = kDefaultTol);

/// Serialization is byte-stable under parse/emit round trips: doubles use
/// shortest-round-trip decimals and key order is fixed.
std::string emit_market(const Market& market);

using StrategyOrBiprocess = std::variant<TradingStrategy, SimpleBiprocess>;

/// Strategy documents: {"kind": "strategy", "steps": [{"pairs": [{"alpha":
/// r, "a": M}, ...]}, ...]}; biprocess documents use pairs {"A": M, "B": M}.
StrategyOrBiprocess parse_strategy_spec(const std::string& text,
                                        const FiltrationPtr& filtration);
std::string emit_strategy(const TradingStrategy& strategy);

// Complex matrices as nested arrays with [re, im] entries; shared with the
// CLI's structured output.
Json element_to_json(const AlgebraElement& x);
AlgebraElement element_from_json(const AlgebraPtr& algebra, const Json& j,
                                 const std::string& context);

}  // namespace ncftap

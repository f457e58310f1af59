#include "ncftap/market_io.hpp"

namespace ncftap {

namespace {

const Json& require_field(const Json& j, const std::string& key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw MarketParseError(context + ": missing field '" + key + "'");
  return *it;
}

double as_number(const Json& j, const std::string& context) {
  if (!j.is_number()) throw MarketParseError(context + ": expected a number");
  return j.get<double>();
}

Complex as_complex(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2)
    throw MarketParseError(context + ": complex entries are [re, im] pairs");
  return Complex(as_number(j[0], context + "[0]"), as_number(j[1], context + "[1]"));
}

}  // namespace

Json element_to_json(const AlgebraElement& x) {
  Json blocks = Json::array();
  for (int k = 0; k < x.block_count(); ++k) {
    const Matrix& b = x.block(k);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        row.push_back(Json::array({b(i, j).real(), b(i, j).imag()}));
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return blocks;
}

AlgebraElement element_from_json(const AlgebraPtr& algebra, const Json& j,
                                 const std::string& context) {
  if (!j.is_array() || static_cast<int>(j.size()) != algebra->block_count())
    throw MarketParseError(context + ": expected " + std::to_string(algebra->block_count()) +
                           " blocks");
  std::vector<Matrix> blocks;
  for (int k = 0; k < algebra->block_count(); ++k) {
    const int n = algebra->block_dims()[k];
    const Json& rows = j[k];
    std::string bctx = context + ".block[" + std::to_string(k) + "]";
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw MarketParseError(bctx + ": expected " + std::to_string(n) + " rows");
    Matrix b(n, n);
    for (int i = 0; i < n; ++i) {
      const Json& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw MarketParseError(bctx + ": row " + std::to_string(i) + " needs " +
                               std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c)
        b(i, c) = as_complex(row[c], bctx + "(" + std::to_string(i) + "," + std::to_string(c) + ")");
    }
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

std::string emit_market(const Market& market) {
  Json j;
  j["format_version"] = 1;
  j["algebra"] = Json{{"block_dims", market.algebra->block_dims()},
                      {"trace_weights", market.algebra->trace_weights()}};
  Json levels = Json::array();
  for (const auto& gens : market.level_generators) {
    Json g = Json::array();
    for (const AlgebraElement& e : gens) g.push_back(element_to_json(e));
    levels.push_back(Json{{"generators", std::move(g)}});
  }
  j["filtration"] = Json{{"times", market.filtration->times}, {"levels", std::move(levels)}};
  Json process = Json::array();
  for (const AlgebraElement& x : market.process_values) process.push_back(element_to_json(x));
  j["process"] = std::move(process);
  return j.dump(1) + "\n";
}

ParsedMarket parse_market(const std::string& text, double tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MarketParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw MarketParseError("document root must be an object");
  const Json& version = require_field(j, "format_version", "document");
  if (!version.is_number_integer() || version.get<int>() != 1)
    throw MarketParseError("unsupported format_version");

  const Json& ja = require_field(j, "algebra", "document");
  const Json& jdims = require_field(ja, "block_dims", "algebra");
  const Json& jweights = require_field(ja, "trace_weights", "algebra");
  if (!jdims.is_array() || jdims.empty())
    throw MarketParseError("algebra.block_dims: expected a nonempty array");
  std::vector<int> dims;
  for (std::size_t k = 0; k < jdims.size(); ++k) {
    if (!jdims[k].is_number_integer())
      throw MarketParseError("algebra.block_dims[" + std::to_string(k) + "]: expected an integer");
    dims.push_back(jdims[k].get<int>());
  }
  if (!jweights.is_array() || jweights.size() != jdims.size())
    throw MarketParseError("algebra.trace_weights must match block_dims");
  std::vector<double> weights;
  for (std::size_t k = 0; k < jweights.size(); ++k)
    weights.push_back(as_number(jweights[k], "algebra.trace_weights[" + std::to_string(k) + "]"));

  ParsedMarket out;
  try {
    out.market.algebra = std::make_shared<MultiMatrixAlgebra>(dims, weights);
  } catch (const std::invalid_argument& e) {
    throw MarketParseError(std::string("algebra: ") + e.what());
  }

  const Json& jf = require_field(j, "filtration", "document");
  const Json& jtimes = require_field(jf, "times", "filtration");
  const Json& jlevels = require_field(jf, "levels", "filtration");
  if (!jtimes.is_array() || jtimes.size() < 1)
    throw MarketParseError("filtration.times: expected a nonempty array");
  if (!jlevels.is_array() || jlevels.size() != jtimes.size())
    throw MarketParseError("filtration.levels must match times");

  auto filtration = std::make_shared<Filtration>();
  for (std::size_t k = 0; k < jtimes.size(); ++k)
    filtration->times.push_back(as_number(jtimes[k], "filtration.times[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < jlevels.size(); ++k) {
    std::string ctx = "filtration.levels[" + std::to_string(k) + "]";
    const Json& jgens = require_field(jlevels[k], "generators", ctx);
    if (!jgens.is_array()) throw MarketParseError(ctx + ".generators: expected an array");
    std::vector<AlgebraElement> gens;
    for (std::size_t g = 0; g < jgens.size(); ++g)
      gens.push_back(element_from_json(out.market.algebra, jgens[g],
                                       ctx + ".generators[" + std::to_string(g) + "]"));
    filtration->levels.push_back(make_subalgebra(out.market.algebra, gens));
    out.market.level_generators.push_back(std::move(gens));
  }
  out.market.filtration = filtration;

  const Json& jp = require_field(j, "process", "document");
  if (!jp.is_array() || jp.size() != jtimes.size())
    throw MarketParseError("process must carry one matrix per filtration time");
  for (std::size_t k = 0; k < jp.size(); ++k)
    out.market.process_values.push_back(
        element_from_json(out.market.algebra, jp[k], "process[" + std::to_string(k) + "]"));

  out.filtration_report = validate_filtration(*filtration, tol);
  out.process_report = validate_adapted(out.market.process(), tol);
  return out;
}

StrategyOrBiprocess parse_strategy_spec(const std::string& text,
                                        const FiltrationPtr& filtration) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MarketParseError(std::string("invalid JSON: ") + e.what());
  }
  const Json& kind = require_field(j, "kind", "document");
  const Json& jsteps = require_field(j, "steps", "document");
  if (!jsteps.is_array() || static_cast<int>(jsteps.size()) != filtration->steps())
    throw MarketParseError("steps: expected one entry per grid interval (" +
                           std::to_string(filtration->steps()) + ")");
  const AlgebraPtr& alg = filtration->algebra();
  if (kind == "strategy") {
    std::vector<std::vector<StrategyLeg>> steps(jsteps.size());
    for (std::size_t k = 0; k < jsteps.size(); ++k) {
      std::string ctx = "steps[" + std::to_string(k) + "]";
      const Json& pairs = require_field(jsteps[k], "pairs", ctx);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::string pctx = ctx + ".pairs[" + std::to_string(p) + "]";
        double alpha = as_number(require_field(pairs[p], "alpha", pctx), pctx + ".alpha");
        steps[k].push_back(
            {alpha, element_from_json(alg, require_field(pairs[p], "a", pctx), pctx + ".a")});
      }
    }
    return TradingStrategy(filtration, std::move(steps));
  }
  if (kind == "biprocess") {
    std::vector<std::vector<BiprocessPair>> steps(jsteps.size());
    for (std::size_t k = 0; k < jsteps.size(); ++k) {
      std::string ctx = "steps[" + std::to_string(k) + "]";
      const Json& pairs = require_field(jsteps[k], "pairs", ctx);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::string pctx = ctx + ".pairs[" + std::to_string(p) + "]";
        steps[k].push_back(
            {element_from_json(alg, require_field(pairs[p], "A", pctx), pctx + ".A"),
             element_from_json(alg, require_field(pairs[p], "B", pctx), pctx + ".B")});
      }
    }
    return SimpleBiprocess(filtration, std::move(steps));
  }
  throw MarketParseError("kind must be 'strategy' or 'biprocess'");
}

std::string emit_strategy(const TradingStrategy& strategy) {
  Json j;
  j["format_version"] = 1;
  j["kind"] = "strategy";
  Json steps = Json::array();
  for (const auto& step : strategy.steps()) {
    Json pairs = Json::array();
    for (const StrategyLeg& leg : step)
      pairs.push_back(Json{{"alpha", leg.weight}, {"a", element_to_json(leg.element)}});
    steps.push_back(Json{{"pairs", std::move(pairs)}});
  }
  j["steps"] = std::move(steps);
  return j.dump(1) + "\n";
}

}  // namespace ncftap

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncftap/ftap.hpp"
#include "ncftap/market_io.hpp"

namespace {

using namespace ncftap;

std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void print_element(std::ostream& os, const AlgebraElement& x) {
  os << std::setprecision(17);
  for (int k = 0; k < x.block_count(); ++k) {
    const Matrix& b = x.block(k);
    os << "block " << k << " (" << b.rows() << "x" << b.cols() << "):\n";
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      os << " ";
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        os << " (" << b(i, j).real() << ", " << b(i, j).imag() << ")";
      os << "\n";
    }
  }
}

Json report_to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const CheckResult& c : report.checks())
    checks.push_back(Json{{"name", c.name},
                          {"residual", c.residual},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
  return Json{{"pass", report.pass()}, {"checks", std::move(checks)}};
}

Json strategy_to_json(const TradingStrategy& strategy) {
  Json steps = Json::array();
  for (const auto& step : strategy.steps()) {
    Json pairs = Json::array();
    for (const StrategyLeg& leg : step)
      pairs.push_back(Json{{"alpha", leg.weight}, {"a", element_to_json(leg.element)}});
    steps.push_back(Json{{"pairs", std::move(pairs)}});
  }
  return Json{{"kind", "strategy"}, {"steps", std::move(steps)}};
}

// Parses the market and insists on valid filtration/adaptedness; returns
// nullopt after printing the first failing residual.
std::optional<ParsedMarket> load_market_checked(const std::string& path, double tol) {
  ParsedMarket parsed = parse_market(load_file(path), tol);
  if (!parsed.valid()) {
    const CheckResult* f = parsed.filtration_report.first_failure();
    if (!f) f = parsed.process_report.first_failure();
    std::cerr << "error: " << path << " failed validation: " << f->name
              << " (residual " << f->residual << ", threshold " << f->threshold << ")\n";
    return std::nullopt;
  }
  return parsed;
}

int cmd_check(const std::string& path, double tol, double tol_pos, bool as_json) {
  auto parsed = load_market_checked(path, tol);
  if (!parsed) return 1;
  AdaptedProcess X = parsed->market.process();
  Verdict verdict = check_nfl(X, tol, tol_pos);
  ValidationReport verification = verify_certificate(verdict, X, tol, tol_pos);

  if (as_json) {
    Json j;
    j["outcome"] = to_string(verdict.outcome);
    j["lambda_star"] = verdict.lambda_star;
    if (std::isnan(verdict.mu_star))
      j["mu_star"] = nullptr;
    else
      j["mu_star"] = verdict.mu_star;
    j["tol"] = tol;
    j["tol_pos"] = tol_pos;
    if (verdict.ems_state)
      j["certificate"] =
          Json{{"type", "ems"}, {"density", element_to_json(verdict.ems_state->density())}};
    else if (verdict.arbitrage)
      j["certificate"] = Json{{"type", "arbitrage"},
                              {"strategy", strategy_to_json(verdict.arbitrage->strategy)},
                              {"payoff", element_to_json(verdict.arbitrage->payoff)}};
    else
      j["certificate"] = nullptr;
    j["verification"] = report_to_json(verification);
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "outcome: " << to_string(verdict.outcome) << "\n";
    std::cout << std::setprecision(17) << "lambda_star: " << verdict.lambda_star << "\n";
    if (std::isnan(verdict.mu_star))
      std::cout << "mu_star: (arbitrage search not run)\n";
    else
      std::cout << "mu_star: " << verdict.mu_star << "\n";
    if (verdict.ems_state) {
      std::cout << "faithful martingale state density:\n";
      print_element(std::cout, verdict.ems_state->density());
    } else if (verdict.arbitrage) {
      std::cout << "arbitrage payoff k:\n";
      print_element(std::cout, verdict.arbitrage->payoff);
      std::cout << "arbitrage strategy:\n" << emit_strategy(verdict.arbitrage->strategy);
    }
    std::cout << "verification:\n" << verification.to_string();
  }
  if (!verification.pass()) {
    std::cerr << "error: certificate failed verification\n";
    return 1;
  }
  switch (verdict.outcome) {
    case Outcome::kEms: return 0;
    case Outcome::kArbitrage: return 2;
    case Outcome::kUndecided: return 3;
  }
  return 3;
}

int cmd_integrate(const std::string& path, const std::string& strategy_spec, double from,
                  double to, bool have_from, bool have_to, double tol, bool as_json) {
  auto parsed = load_market_checked(path, tol);
  if (!parsed) return 1;
  const Market& market = parsed->market;
  AdaptedProcess X = market.process();
  if (!have_from) from = market.filtration->times.front();
  if (!have_to) to = market.filtration->times.back();

  StrategyOrBiprocess spec =
      strategy_spec == "identity"
          ? StrategyOrBiprocess(TradingStrategy(
                market.filtration,
                std::vector<std::vector<StrategyLeg>>(
                    market.filtration->steps(),
                    {StrategyLeg{1.0, AlgebraElement::identity(market.algebra)}})))
          : parse_strategy_spec(load_file(strategy_spec), market.filtration);

  const bool is_strategy = std::holds_alternative<TradingStrategy>(spec);
  SimpleBiprocess biprocess =
      is_strategy ? strategy_to_biprocess(std::get<TradingStrategy>(spec))
                  : std::get<SimpleBiprocess>(spec);
  ValidationReport adapted = validate_adapted(biprocess, tol);
  if (!adapted.pass()) {
    const CheckResult* f = adapted.first_failure();
    std::cerr << "error: strategy is not adapted: " << f->name << " (residual " << f->residual
              << ")\n";
    return 1;
  }
  AlgebraElement integral = stopped_integral(biprocess, from, to, X);

  if (as_json) {
    Json j;
    j["from"] = from;
    j["to"] = to;
    j["integral"] = element_to_json(integral);
    if (is_strategy)
      j["self_adjointness_residual"] = integral.self_adjointness_residual();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << std::setprecision(17) << "integral over [" << from << ", " << to << "):\n";
    print_element(std::cout, integral);
    if (is_strategy)
      std::cout << "self-adjointness residual: " << integral.self_adjointness_residual() << "\n";
  }
  return 0;
}

int cmd_generate(const std::string& kind, int periods, double u, double d, double r, double s0,
                 const std::vector<double>& angles, std::uint64_t seed,
                 const std::vector<int>& dims, const std::string& out) {
  Market market;
  if (kind == "classical") {
    market = embed_classical(binomial_tree(periods, u, d, r, s0));
  } else if (kind == "qbinomial") {
    QuantumBinomialSpec spec;
    spec.periods = periods;
    spec.up = u;
    spec.down = d;
    spec.rate = r;
    spec.basis_angles = angles;
    market = quantum_binomial(spec);
  } else if (kind == "random") {
    market = random_market(seed, dims, periods);
  } else {
    std::cerr << "error: unknown generator kind '" << kind << "'\n";
    return 1;
  }
  write_output(out, emit_market(market));
  return 0;
}

int cmd_validate(const std::string& path, double tol, bool as_json) {
  ParsedMarket parsed = parse_market(load_file(path), tol);
  if (as_json) {
    Json j;
    j["filtration"] = report_to_json(parsed.filtration_report);
    j["process"] = report_to_json(parsed.process_report);
    j["pass"] = parsed.valid();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "filtration checks:\n" << parsed.filtration_report.to_string();
    std::cout << "process checks:\n" << parsed.process_report.to_string();
  }
  return parsed.valid() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncftap - martingale states and arbitrage certificates for "
               "finite-dimensional quantum markets"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  if (const char* env = std::getenv("NCFTAP_TOL")) tol = std::atof(env);
  double tol_pos = kDefaultTolPos;

  std::string path, out, strategy_spec = "identity", kind;
  bool as_json = false;
  double from = 0.0, to = 0.0;
  int periods = 1;
  double u = 1.2, d = 0.9, r = 0.0, s0 = 1.0;
  std::vector<double> angles;
  std::vector<int> dims{2};
  std::uint64_t seed = 1;

  CLI::App* check = app.add_subcommand("check", "decide EMS vs quantum arbitrage for a market");
  check->add_option("path", path, "market file")->required();
  check->add_option("--tol", tol, "feasibility tolerance");
  check->add_option("--tol-pos", tol_pos, "strict-positivity margin");
  check->add_flag("--json", as_json, "machine-readable output");

  CLI::App* integrate = app.add_subcommand("integrate", "stochastic integral of a strategy");
  integrate->add_option("path", path, "market file")->required();
  integrate->add_option("--strategy", strategy_spec, "strategy file or 'identity'");
  CLI::Option* opt_from = integrate->add_option("--from", from, "window start (grid time)");
  CLI::Option* opt_to = integrate->add_option("--to", to, "window end (grid time)");
  integrate->add_option("--tol", tol, "adaptedness tolerance");
  integrate->add_flag("--json", as_json, "machine-readable output");

  CLI::App* generate = app.add_subcommand("generate", "write a market instance");
  generate->add_option("kind", kind, "classical | qbinomial | random")->required();
  generate->add_option("--periods", periods, "number of periods");
  generate->add_option("--u", u, "up factor");
  generate->add_option("--d", d, "down factor");
  generate->add_option("--r", r, "per-period riskless rate");
  generate->add_option("--s0", s0, "initial price (classical)");
  generate->add_option("--angles", angles, "per-period basis angles (qbinomial)");
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--dims", dims, "block dimensions (random)");
  generate->add_option("--out", out, "output path ('-' for stdout)");

  CLI::App* validate = app.add_subcommand("validate", "run filtration/adaptedness validators");
  validate->add_option("path", path, "market file")->required();
  validate->add_option("--tol", tol, "tolerance");
  validate->add_flag("--json", as_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check)) return cmd_check(path, tol, tol_pos, as_json);
    if (app.got_subcommand(integrate))
      return cmd_integrate(path, strategy_spec, from, to, opt_from->count() > 0,
                           opt_to->count() > 0, tol, as_json);
    if (app.got_subcommand(generate))
      return cmd_generate(kind, periods, u, d, r, s0, angles, seed, dims, out);
    if (app.got_subcommand(validate)) return cmd_validate(path, tol, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraudgame/dynamics.hpp"
#include "fraudgame/equilibrium.hpp"
#include "fraudgame/montecarlo.hpp"
#include "fraudgame/verify.hpp"

namespace fraudgame::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  double r = 0.05;
  double M = 3.0;
  double p = 0.3;
  double dt = 1e-3;
  std::optional<double> horizon;
  double clamp_eps = 1e-9;
  std::uint64_t seed = 1;
  std::size_t paths = 10000;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
  std::size_t grid = 0;
  std::string fraud = "equilibrium";
  std::string stopper = "equilibrium";
  std::vector<double> levels;
  std::string trace;

  ModelParams model() const { return {r, M, p}; }

  PathConfig path_config() const {
    PathConfig c = PathConfig::for_rate(r);
    if (horizon) c.horizon = *horizon;
    c.dt = dt;
    c.clamp_eps = clamp_eps;
    c.seed = seed;
    return c;
  }

  Parallelism parallelism() const { return {threads}; }
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

std::string fmt_short(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(7);
  os << x;
  return os.str();
}

// Minimal table: every command emits one, as CSV or as JSON rows.
using Cell = std::variant<std::monostate, std::string, double, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return csv_field(s); }
    std::string operator()(double x) const { return fmt(x); }
    std::string operator()(std::uint64_t n) const { return std::to_string(n); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

json cell_json(const Cell& c) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(const std::string& s) const { return s; }
    // Non-finite values (beta at a sure stop) have no JSON literal.
    json operator()(double x) const { return std::isfinite(x) ? json(x) : json(nullptr); }
    json operator()(std::uint64_t n) const { return n; }
    json operator()(bool b) const { return b; }
  } visitor;
  return std::visit(visitor, c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

json rows_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

void emit(std::ostream& os, const Options& opt, const std::string& command, const Table& t, json extra = json::object()) {
  if (opt.format == "json") {
    json doc;
    doc["command"] = command;
    doc["model"] = {{"r", opt.r}, {"M", opt.M}, {"p", opt.p}};
    for (auto& [k, v] : extra.items()) doc[k] = v;
    doc["rows"] = rows_json(t);
    os << doc.dump(2) << '\n';
  } else {
    write_csv(os, t);
  }
}

Table estimates_table() { return {{"label", "mean", "std_error", "n_paths", "dt", "horizon", "seed"}, {}}; }

void add_estimate(Table& t, const std::string& label, const PayoffEstimate& e, std::uint64_t seed) {
  t.rows.push_back({label, e.mean, e.std_error, static_cast<std::uint64_t>(e.n_paths), e.dt_used, e.horizon_used,
                    seed});
}

StopperStrategy stopper_from(const Options& opt, const Equilibrium& eq) {
  if (opt.stopper == "equilibrium") return equilibrium_stopper(eq);
  return parse_stopper_strategy(opt.stopper);
}

// --- subcommands -----------------------------------------------------------

int cmd_solve(const Options& opt, std::ostream& os) {
  const auto params = opt.model();
  const auto eq = solve(params);
  const auto regime = classify(params);
  Table t;
  t.columns = {"regime", "r", "M", "m_hat", "b"};
  std::vector<Cell> row = {std::string(to_string(regime.kind)), params.r, params.M, regime.m_hat, threshold_b(eq)};
  if (const auto* m = std::get_if<MixedEquilibrium>(&eq)) {
    t.columns.insert(t.columns.end(), {"v_b", "a"});
    row.insert(row.end(), {m->v_b(), m->a()});
  }
  t.rows.push_back(std::move(row));
  emit(os, opt, "solve", t);
  return kOk;
}

int cmd_curves(const Options& opt, std::ostream& os) {
  const auto params = opt.model();
  const auto eq = solve(params);
  const bool mixed = regime_of(eq) == RegimeKind::Mixed;
  const std::size_t n = opt.grid == 0 ? 2000 : opt.grid;
  if (n < 2) throw UsageError("--grid must be at least 2");
  Table t;
  t.columns = {"p", "v", "u", "pv", "lambda_star"};
  if (mixed) t.columns.push_back("beta");
  for (double p : uniform_grid(0.001, 0.999, n)) {
    const double v = value_fraudster(eq, p);
    std::vector<Cell> row = {p, v, value_account(eq, p), p * v, lambda_star(eq, p)};
    if (mixed) {
      const auto b = beta(eq, p);
      row.push_back(b.immediate ? std::numeric_limits<double>::infinity() : b.rate);
    }
    t.rows.push_back(std::move(row));
  }
  emit(os, opt, "curves", t, {{"regime", std::string(to_string(regime_of(eq)))}});
  return kOk;
}

int cmd_simulate(const Options& opt, std::ostream& os) {
  const auto params = opt.model();
  const auto eq = solve(params);
  const auto config = opt.path_config();
  const auto fraud = parse_fraud_strategy(opt.fraud);
  const auto stop = stopper_from(opt, eq);
  const auto par = opt.parallelism();

  const auto cost = estimate_account_cost(params, eq, stop, fraud, opt.paths, config, par);
  const auto interim = estimate_fraud_payoff_interim(params, eq, stop, fraud, opt.paths, config, par);
  PayoffEstimate exante = interim;
  exante.mean *= params.p;
  exante.std_error *= params.p;

  Table t = estimates_table();
  add_estimate(t, "account_cost", cost, opt.seed);
  add_estimate(t, "fraud_payoff_interim", interim, opt.seed);
  add_estimate(t, "fraud_payoff_exante", exante, opt.seed);
  emit(os, opt, "simulate", t,
       {{"fraud", to_string(fraud)}, {"stopper", to_string(stop)}, {"seed", opt.seed}});

  if (!opt.trace.empty()) {
    // Path 0 of the account-cost run, with its theta drawn the same way.
    PathConfig traced = config;
    traced.record_path = true;
    RngStream stream(config.seed, 0);
    const int theta = stream.uniform() < params.p ? 1 : 0;
    PathTrace trace;
    simulate_path(params, eq, fraud, stop, theta, traced, stream, &trace);
    std::ofstream f(opt.trace);
    if (!f) throw UsageError("cannot open trace file " + opt.trace);
    trace.write_csv(f);
  }
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& os, std::ostream& err) {
  const auto eq = solve(opt.model());
  const std::size_t n = opt.grid == 0 ? 1000 : opt.grid;
  if (n < 100) throw UsageError("--grid must be at least 100 for verify");
  const auto residual = residual_suite(eq, n);
  const auto inequalities = inequality_scan();

  Table t;
  t.columns = {"suite", "check", "passed", "statistic", "tolerance", "measure", "grid"};
  const auto add = [&](const char* suite, const VerifyReport& rep) {
    for (const auto& c : rep.checks) {
      t.rows.push_back({std::string(suite), c.name, c.passed, c.statistic, c.tolerance, c.measure, c.grid});
    }
  };
  add("residual", residual);
  add("inequality", inequalities);
  const bool ok = residual.passed() && inequalities.passed();
  emit(os, opt, "verify", t, {{"regime", std::string(to_string(residual.regime))}, {"passed", ok}});
  for (const auto* rep : {&residual, &inequalities}) {
    for (const auto& c : rep->checks) {
      if (!c.passed) err << "check failed: " << c.name << " statistic " << fmt(c.statistic) << " tolerance " << fmt(c.tolerance) << '\n';
    }
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_best_response(const Options& opt, std::ostream& os, std::ostream& err) {
  const auto params = opt.model();
  const auto eq = solve(params);
  const auto config = opt.path_config();
  const auto par = opt.parallelism();
  const std::vector<double> levels = opt.levels.empty() ? default_threshold_levels(eq) : opt.levels;

  std::vector<StopperStrategy> stoppers = {equilibrium_stopper(eq)};
  for (double level : levels) stoppers.push_back(stopper::Threshold{level});
  for (const auto& s : stoppers) validate(s);
  const auto costs = stopper_sweep(params, eq, stoppers, fraud::EquilibriumRate{}, opt.paths, config, par);

  std::vector<FraudStrategy> frauds = {fraud::EquilibriumRate{}};
  for (auto& f : default_fraud_deviations(eq, params.p)) frauds.push_back(f);
  const auto payoffs = deviation_sweep_fraud(params, eq, frauds, opt.paths, config, par);

  Table t = estimates_table();
  bool ok = true;
  const auto& eq_cost = costs.front();
  for (std::size_t k = 0; k < stoppers.size(); ++k) {
    add_estimate(t, "stopper:" + to_string(stoppers[k]), costs[k], opt.seed);
    if (k > 0 && !stopper_deviation_acceptable(eq_cost, costs[k])) {
      ok = false;
      err << "stopper deviation " << to_string(stoppers[k]) << " lowers the account cost to " << fmt(costs[k].mean)
          << " (equilibrium " << fmt(eq_cost.mean) << ")\n";
    }
  }
  const double v = value_fraudster(eq, params.p);
  for (std::size_t k = 0; k < payoffs.size(); ++k) {
    add_estimate(t, "fraud:" + to_string(payoffs[k].strategy), payoffs[k].payoff, opt.seed);
    if (k > 0 && !fraud_deviation_acceptable(v, payoffs[k].payoff)) {
      ok = false;
      err << "fraud deviation " << to_string(payoffs[k].strategy) << " raises the payoff to "
          << fmt(payoffs[k].payoff.mean) << " (v(p) = " << fmt(v) << ")\n";
    }
  }
  emit(os, opt, "best-response", t, {{"seed", opt.seed}, {"v", v}, {"u", value_account(eq, params.p)}, {"passed", ok}});
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Equilibria, simulation and verification for the fraud detection stopping game", "fraudgame"};
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  app.add_option("--r", opt.r, "Discount rate")->capture_default_str();
  app.add_option("--M", opt.M, "Deactivation cost")->capture_default_str();
  app.add_option("--p", opt.p, "Prior probability the fraudster is active")->capture_default_str();
  app.add_option("--dt", opt.dt, "Euler step")->capture_default_str();
  app.add_option("--horizon", opt.horizon, "Simulation horizon (default 12/r)");
  app.add_option("--clamp-eps", opt.clamp_eps, "Belief clamp")->capture_default_str();
  app.add_option("--seed", opt.seed, "Base seed")->capture_default_str();
  app.add_option("--paths", opt.paths, "Monte-Carlo paths")->capture_default_str()->check(CLI::Range(2, 100000000));
  app.add_option("--threads", opt.threads, "Worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--format", opt.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", opt.output, "Output file (default stdout)");
  app.add_option("--grid", opt.grid, "Grid points (curves: 2000, verify: 1000)");
  app.add_option("--fraud", opt.fraud, "equilibrium | constant:<rate> | scaled:<c> | null")->capture_default_str();
  app.add_option("--stopper", opt.stopper, "equilibrium | threshold:<level> | randomized | immediate | never")
      ->capture_default_str();
  app.add_option("--levels", opt.levels, "Threshold levels for best-response")->delimiter(',');
  app.add_option("--trace", opt.trace, "simulate: write path 0 as CSV to this file");

  auto* solve_cmd = app.add_subcommand("solve", "Print the regime, b (and v_b, a) and M_hat");
  auto* curves_cmd = app.add_subcommand("curves", "Equilibrium curves on a belief grid");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo payoff estimates");
  auto* verify_cmd = app.add_subcommand("verify", "Analytic residual and inequality checks");
  auto* br_cmd = app.add_subcommand("best-response", "Stopper and fraud deviation sweeps");
  for (auto* sub : {solve_cmd, curves_cmd, sim_cmd, verify_cmd, br_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    std::ofstream file;
    if (!opt.output.empty()) {
      file.open(opt.output);
      if (!file) throw UsageError("cannot open output file " + opt.output);
    }
    std::ostream& os = opt.output.empty() ? out : file;

    if (*solve_cmd) return cmd_solve(opt, os);
    if (*curves_cmd) return cmd_curves(opt, os);
    if (*sim_cmd) return cmd_simulate(opt, os);
    if (*verify_cmd) return cmd_verify(opt, os, err);
    return cmd_best_response(opt, os, err);
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << "; M_hat = " << fmt_short(e.m_hat()) << " for r = " << fmt_short(opt.r) << '\n';
    return kRegime;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace fraudgame::cli

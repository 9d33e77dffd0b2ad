#include "fraudgame/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fraudgame {

namespace {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

unsigned resolve_workers(Parallelism par, std::size_t n) {
  unsigned w = par.workers;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
}

template <class Body>
void parallel_for(std::size_t n, Parallelism par, Body body) {
  const unsigned workers = resolve_workers(par, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_paths(std::size_t n) {
  if (n < 2) throw std::domain_error("at least two paths are required");
}

}  // namespace

PayoffEstimate summarize(std::span<const double> samples, const PathConfig& config) {
  require_paths(samples.size());
  const double n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  std::vector<double> sq(samples.size());
  std::transform(samples.begin(), samples.end(), sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n), samples.size(), config.dt, config.horizon};
}

std::vector<std::vector<PathOutcome>> run_paths(const ModelParams& params, const Equilibrium& eq,
                                                const FraudStrategy& fraud,
                                                std::span<const StopperStrategy> stoppers,
                                                ThetaMode mode, std::size_t n, const PathConfig& config,
                                                Parallelism par) {
  params.validate();
  config.validate();
  std::vector<std::vector<PathOutcome>> out(stoppers.size(), std::vector<PathOutcome>(n));
  parallel_for(n, par, [&](std::size_t i) {
    RngStream stream(config.seed, i);
    const double u = stream.uniform();
    const int theta = (mode == ThetaMode::Active || u < params.p) ? 1 : 0;
    auto outcomes = simulate_path_multi(params, eq, fraud, stoppers, theta, config, stream);
    for (std::size_t k = 0; k < stoppers.size(); ++k) out[k][i] = outcomes[k];
  });
  return out;
}

double account_cost(const PathOutcome& outcome, double M) {
  return (outcome.theta != 0 ? outcome.discounted_theft : 0.0) +
         (outcome.stopped() ? outcome.stop_discount * M : 0.0);
}

PayoffEstimate estimate_account_cost(const ModelParams& params, const Equilibrium& eq,
                                     const StopperStrategy& stopper, const FraudStrategy& fraud,
                                     std::size_t n, const PathConfig& config, Parallelism par) {
  require_paths(n);
  const auto runs = run_paths(params, eq, fraud, {&stopper, 1}, ThetaMode::Prior, n, config, par);
  std::vector<double> costs(n);
  std::transform(runs[0].begin(), runs[0].end(), costs.begin(),
                 [&](const PathOutcome& o) { return account_cost(o, params.M); });
  return summarize(costs, config);
}

PayoffEstimate estimate_fraud_payoff_interim(const ModelParams& params, const Equilibrium& eq,
                                             const StopperStrategy& stopper, const FraudStrategy& fraud,
                                             std::size_t n, const PathConfig& config, Parallelism par) {
  require_paths(n);
  const auto runs = run_paths(params, eq, fraud, {&stopper, 1}, ThetaMode::Active, n, config, par);
  std::vector<double> theft(n);
  std::transform(runs[0].begin(), runs[0].end(), theft.begin(),
                 [](const PathOutcome& o) { return o.discounted_theft; });
  return summarize(theft, config);
}

PayoffEstimate estimate_fraud_payoff_exante(const ModelParams& params, const Equilibrium& eq,
                                            const StopperStrategy& stopper, const FraudStrategy& fraud,
                                            std::size_t n, const PathConfig& config, Parallelism par) {
  auto est = estimate_fraud_payoff_interim(params, eq, stopper, fraud, n, config, par);
  est.mean *= params.p;
  est.std_error *= params.p;
  return est;
}

StopperStrategy equilibrium_stopper(const Equilibrium& eq) {
  if (regime_of(eq) == RegimeKind::Pure) return stopper::Threshold{threshold_b(eq)};
  return stopper::RandomizedIntensity{};
}

std::vector<PayoffEstimate> stopper_sweep(const ModelParams& params, const Equilibrium& eq,
                                          std::span<const StopperStrategy> stoppers, const FraudStrategy& fraud,
                                          std::size_t n, const PathConfig& config, Parallelism par) {
  require_paths(n);
  const auto runs = run_paths(params, eq, fraud, stoppers, ThetaMode::Prior, n, config, par);
  std::vector<PayoffEstimate> out;
  out.reserve(stoppers.size());
  std::vector<double> costs(n);
  for (const auto& run : runs) {
    std::transform(run.begin(), run.end(), costs.begin(),
                   [&](const PathOutcome& o) { return account_cost(o, params.M); });
    out.push_back(summarize(costs, config));
  }
  return out;
}

std::vector<StopperSweepRow> deviation_sweep_stopper(const ModelParams& params, const Equilibrium& eq,
                                                     std::span<const double> levels, std::size_t n,
                                                     const PathConfig& config, Parallelism par) {
  require_paths(n);
  std::vector<StopperStrategy> stoppers;
  stoppers.reserve(levels.size());
  for (double level : levels) {
    StopperStrategy s = stopper::Threshold{level};
    validate(s);
    stoppers.push_back(s);
  }
  const auto costs = stopper_sweep(params, eq, stoppers, fraud::EquilibriumRate{}, n, config, par);
  std::vector<StopperSweepRow> rows;
  rows.reserve(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) rows.push_back({levels[k], costs[k]});
  return rows;
}

std::vector<FraudSweepRow> deviation_sweep_fraud(const ModelParams& params, const Equilibrium& eq,
                                                 std::span<const FraudStrategy> strategies, std::size_t n,
                                                 const PathConfig& config, Parallelism par) {
  const auto stop = equilibrium_stopper(eq);
  std::vector<FraudSweepRow> rows;
  rows.reserve(strategies.size());
  for (const auto& s : strategies) {
    rows.push_back({s, estimate_fraud_payoff_interim(params, eq, stop, s, n, config, par)});
  }
  return rows;
}

std::vector<double> default_threshold_levels(const Equilibrium& eq) {
  if (const auto* m = std::get_if<MixedEquilibrium>(&eq)) {
    const double b = m->b();
    const double w = m->a() - b;
    return {b + 0.25 * w, b + 0.5 * w, b + 0.75 * w};
  }
  const double b = threshold_b(eq);
  return {0.8 * b, 0.9 * b, 1.1 * b, 0.5};
}

std::vector<FraudStrategy> default_fraud_deviations(const Equilibrium& eq, double p) {
  const double lam = lambda_star(eq, p);
  return {fraud::ConstantRate{0.5 * lam}, fraud::ConstantRate{2.0 * lam}, fraud::ScaledEquilibrium{0.5},
          fraud::ScaledEquilibrium{2.0}};
}

bool stopper_deviation_acceptable(const PayoffEstimate& equilibrium, const PayoffEstimate& deviation) {
  const double se = std::max(equilibrium.std_error, deviation.std_error);
  return deviation.mean >= equilibrium.mean - 3.0 * se;
}

bool fraud_deviation_acceptable(double v_p, const PayoffEstimate& deviation) {
  return deviation.mean <= v_p + 3.0 * deviation.std_error + 0.02 * v_p;
}

bool within_tolerance(const PayoffEstimate& estimate, double target, double allowance) {
  return std::fabs(estimate.mean - target) <= std::max(3.0 * estimate.std_error, allowance);
}

std::vector<CalibrationBin> filter_calibration(const ModelParams& params, const Equilibrium& eq,
                                               std::size_t n, std::size_t bins, const PathConfig& config,
                                               Parallelism par) {
  if (bins == 0 || n < bins) throw std::domain_error("filter_calibration: need at least one path per bin");
  const StopperStrategy never = stopper::Never{};
  const auto runs =
      run_paths(params, eq, fraud::EquilibriumRate{}, {&never, 1}, ThetaMode::Prior, n, config, par);
  const auto& paths = runs[0];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return paths[i].final_belief < paths[j].final_belief;
  });

  std::vector<CalibrationBin> out;
  out.reserve(bins);
  std::vector<double> beliefs;
  std::vector<double> thetas;
  for (std::size_t k = 0; k < bins; ++k) {
    const std::size_t lo = k * n / bins;
    const std::size_t hi = (k + 1) * n / bins;
    beliefs.clear();
    thetas.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      beliefs.push_back(paths[order[j]].final_belief);
      thetas.push_back(static_cast<double>(paths[order[j]].theta));
    }
    const double count = static_cast<double>(hi - lo);
    out.push_back({pairwise_sum(beliefs) / count, pairwise_sum(thetas) / count, hi - lo});
  }
  return out;
}

}  // namespace fraudgame

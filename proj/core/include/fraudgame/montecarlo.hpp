#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fraudgame/dynamics.hpp"
#include "fraudgame/equilibrium.hpp"
#include "fraudgame/model.hpp"

namespace fraudgame {

struct PayoffEstimate {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(n).
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double dt_used = 0.0;
  double horizon_used = 0.0;
};

/// How the hidden state is drawn for each path.
enum class ThetaMode {
  Prior,   // theta ~ Bernoulli(p)
  Active,  // theta = 1 (interim game)
};

/// 0 means std::thread::hardware_concurrency().
struct Parallelism {
  unsigned workers = 0;
};

/// Mean and standard error with pairwise summation in index order, so the
/// result is independent of how the samples were produced.
PayoffEstimate summarize(std::span<const double> samples, const PathConfig& config);

/// Simulates n paths and evaluates every stopper on each of them. Path i uses
/// RngStream(config.seed, i): one uniform for theta, one Exp(1), then normals.
/// Result is indexed [stopper][path].
std::vector<std::vector<PathOutcome>> run_paths(const ModelParams& params, const Equilibrium& eq,
                                                const FraudStrategy& fraud,
                                                std::span<const StopperStrategy> stoppers,
                                                ThetaMode mode, std::size_t n, const PathConfig& config,
                                                Parallelism par = {});

/// theta * discounted theft + M e^{-r tau} 1{tau < horizon}.
double account_cost(const PathOutcome& outcome, double M);

/// Estimates J1 = E[theta int_0^tau e^{-rs} dLambda + e^{-r tau} M 1{tau < inf}].
PayoffEstimate estimate_account_cost(const ModelParams& params, const Equilibrium& eq,
                                     const StopperStrategy& stopper, const FraudStrategy& fraud,
                                     std::size_t n, const PathConfig& config, Parallelism par = {});

/// Estimates the interim payoff E[int_0^tau e^{-rs} dLambda | theta = 1].
PayoffEstimate estimate_fraud_payoff_interim(const ModelParams& params, const Equilibrium& eq,
                                             const StopperStrategy& stopper, const FraudStrategy& fraud,
                                             std::size_t n, const PathConfig& config, Parallelism par = {});

/// Ex ante payoff: p times the interim estimate.
PayoffEstimate estimate_fraud_payoff_exante(const ModelParams& params, const Equilibrium& eq,
                                            const StopperStrategy& stopper, const FraudStrategy& fraud,
                                            std::size_t n, const PathConfig& config, Parallelism par = {});

/// Threshold at b in the pure regime, randomized intensity in the mixed one.
StopperStrategy equilibrium_stopper(const Equilibrium& eq);

/// Account cost of each stopper against `fraud`, all evaluated on the same
/// simulated paths.
std::vector<PayoffEstimate> stopper_sweep(const ModelParams& params, const Equilibrium& eq,
                                          std::span<const StopperStrategy> stoppers, const FraudStrategy& fraud,
                                          std::size_t n, const PathConfig& config, Parallelism par = {});

struct StopperSweepRow {
  double level;
  PayoffEstimate cost;
};

/// Account cost of threshold stoppers against the equilibrium fraud rate.
/// All levels are evaluated on the same simulated paths.
std::vector<StopperSweepRow> deviation_sweep_stopper(const ModelParams& params, const Equilibrium& eq,
                                                     std::span<const double> levels, std::size_t n,
                                                     const PathConfig& config, Parallelism par = {});

struct FraudSweepRow {
  FraudStrategy strategy;
  PayoffEstimate payoff;
};

/// Interim fraud payoff of each strategy against the equilibrium stopper,
/// with the same seed (common random numbers) for every entry.
std::vector<FraudSweepRow> deviation_sweep_fraud(const ModelParams& params, const Equilibrium& eq,
                                                 std::span<const FraudStrategy> strategies, std::size_t n,
                                                 const PathConfig& config, Parallelism par = {});

/// Threshold deviations checked by default: {0.8b, 0.9b, 1.1b, 0.5} in the
/// pure regime, b + {1/4, 1/2, 3/4}(a - b) in the mixed one.
std::vector<double> default_threshold_levels(const Equilibrium& eq);

/// Fraud deviations checked by default: constant rates at half and twice
/// lambda*(p), and the equilibrium rate scaled by 1/2 and 2.
std::vector<FraudStrategy> default_fraud_deviations(const Equilibrium& eq, double p);

/// A stopper deviation is harmless unless it lowers the account cost by more
/// than three standard errors (the larger of the two).
bool stopper_deviation_acceptable(const PayoffEstimate& equilibrium, const PayoffEstimate& deviation);

/// A fraud deviation is harmless unless its interim payoff exceeds v(p) by
/// more than three standard errors plus 2% of v(p) for time discretization.
bool fraud_deviation_acceptable(double v_p, const PayoffEstimate& deviation);

/// |estimate - target| <= max(3 SE, allowance).
bool within_tolerance(const PayoffEstimate& estimate, double target, double allowance);

struct CalibrationBin {
  double mean_belief;
  double mean_theta;
  std::size_t count;
};

/// Runs the equilibrium fraud strategy with theta ~ Bernoulli(p) and no
/// stopping up to config.horizon, sorts paths by terminal belief and splits
/// them into `bins` equal-count groups.
std::vector<CalibrationBin> filter_calibration(const ModelParams& params, const Equilibrium& eq,
                                               std::size_t n, std::size_t bins, const PathConfig& config,
                                               Parallelism par = {});

}  // namespace fraudgame

#pragma once

// Euler-Maruyama simulation of the account holder's belief P.
//
// Given the equilibrium intensity lambda* that the account holder assumes,
// the belief obeys
//
//   dP = lambda* P (1-P) (theta * rate - lambda* P) dt - lambda* P (1-P) dW,
//
// where rate is what the fraudster actually steals at. P is simulated
// directly; the observed holdings X are never materialized.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "fraudgame/equilibrium.hpp"
#include "fraudgame/model.hpp"

namespace fraudgame {

struct PathConfig {
  double dt = 1e-3;
  double horizon = 240.0;
  double clamp_eps = 1e-9;
  std::uint64_t seed = 1;
  bool record_path = false;

  /// Default horizon 12 / r keeps the truncation error e^{-rT} M below 6.2e-6 M.
  static PathConfig for_rate(double r);

  /// Number of Euler steps covering the horizon.
  std::size_t steps() const;

  /// Throws std::domain_error unless dt > 0, horizon >= dt and 0 < clamp_eps < 0.01.
  void validate() const;
};

struct PathOutcome {
  int theta = 0;
  /// Empty when the path was never stopped.
  std::optional<double> stop_time;
  double discounted_theft = 0.0;
  /// e^{-r * stop_time}, or 0 when never stopped.
  double stop_discount = 0.0;
  double final_belief = 0.0;
  bool truncated = false;
  bool touched_lower_clamp = false;

  bool stopped() const noexcept { return stop_time.has_value(); }
};

struct TracePoint {
  double time;
  double belief;
  double gamma;
  double cumulative_theft;
};

struct PathTrace {
  std::vector<TracePoint> points;

  /// Header "time,P,Gamma,cumulative_theft", 17 significant digits.
  void write_csv(std::ostream& os) const;
};

/// Source of the randomness a path consumes: one Exp(1) draw at the start,
/// then one standard-normal increment per Euler step.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double exp1() = 0;
  virtual double normal() = 0;
};

/// Per-path random stream. Streams are a deterministic function of
/// (seed, path_index), so results do not depend on scheduling.
class RngStream final : public NoiseSource {
 public:
  RngStream(std::uint64_t seed, std::uint64_t path_index);

  double uniform();
  double exp1() override;
  double normal() override;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// One Euler step followed by clamping to [clamp_eps, 1 - clamp_eps].
/// Throws std::domain_error for p outside (0, 1).
double belief_step(const Equilibrium& eq, double p, int theta, double fraud_rate, double dt, double z,
                   double clamp_eps = 1e-9);

/// Rate the fraudster steals at when the belief is p and the equilibrium rate is lambda_star.
double fraud_rate(const FraudStrategy& strategy, double lambda_star);

/// Simulates one path from P_0 = params.p with hidden state theta.
/// Throws RegimeError for a randomized stopper paired with a pure equilibrium.
PathOutcome simulate_path(const ModelParams& params, const Equilibrium& eq, const FraudStrategy& fraud,
                          const StopperStrategy& stopper, int theta, const PathConfig& config,
                          NoiseSource& noise, PathTrace* trace = nullptr);

/// Runs several stoppers along one shared belief path. Stopping does not feed
/// back into P, so each outcome equals what simulate_path would return for that
/// stopper on the same stream.
std::vector<PathOutcome> simulate_path_multi(const ModelParams& params, const Equilibrium& eq,
                                             const FraudStrategy& fraud,
                                             std::span<const StopperStrategy> stoppers, int theta,
                                             const PathConfig& config, NoiseSource& noise);

}  // namespace fraudgame

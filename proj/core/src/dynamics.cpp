#include "fraudgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fraudgame {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

inline double euler_step(double p, double lambda, int theta, double rate, double dt, double sqrt_dt,
                         double z, double clamp_eps) {
  const double diffusion = lambda * p * (1.0 - p);
  const double drift = diffusion * ((theta != 0 ? rate : 0.0) - lambda * p);
  const double next = p + drift * dt - diffusion * sqrt_dt * z;
  return std::clamp(next, clamp_eps, 1.0 - clamp_eps);
}

struct StopperState {
  const StopperStrategy* strategy;
  bool randomized;
  double gamma = 0.0;
  bool done = false;
};

// Shared path loop. E is PureEquilibrium or MixedEquilibrium so the hot loop
// calls the evaluators directly.
template <class E>
void run_path(const ModelParams& params, const E& eq, const FraudStrategy& fraud,
              std::span<const StopperStrategy> stoppers, int theta, const PathConfig& config,
              NoiseSource& noise, std::vector<PathOutcome>& out, PathTrace* trace) {
  constexpr bool kMixed = std::is_same_v<E, MixedEquilibrium>;

  std::vector<StopperState> state;
  state.reserve(stoppers.size());
  for (const auto& s : stoppers) {
    const bool randomized = std::holds_alternative<stopper::RandomizedIntensity>(s);
    if (randomized && !kMixed) {
      throw RegimeError("randomized stopping requires the mixed-stopping equilibrium (M > M_hat)",
                        m_hat(params.r));
    }
    state.push_back({&s, randomized});
  }

  out.assign(stoppers.size(), PathOutcome{});
  for (auto& o : out) o.theta = theta;

  // The Exp(1) level is drawn for every path so the stream layout does not
  // depend on which stoppers are being evaluated.
  const double exp_level = noise.exp1();

  const double dt = config.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double step_discount = std::exp(-params.r * dt);
  const std::size_t n_steps = config.steps();
  const double a_level = [&] {
    if constexpr (kMixed) return eq.a();
    return 2.0;
  }();

  double p = params.p;
  double discount = 1.0;
  double theft = 0.0;
  double raw_theft = 0.0;
  bool touched = false;
  std::size_t remaining = stoppers.size();

  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;

    if (trace != nullptr) {
      trace->points.push_back({t, p, state.empty() ? 0.0 : state.front().gamma, raw_theft});
    }

    for (std::size_t k = 0; k < state.size(); ++k) {
      auto& s = state[k];
      if (s.done) continue;
      const bool fire = std::visit(
          overloaded{
              [&](const stopper::Threshold& th) { return p >= th.level; },
              [&](const stopper::RandomizedIntensity&) { return p >= a_level || s.gamma > exp_level; },
              [&](const stopper::Immediate&) { return true; },
              [&](const stopper::Never&) { return false; },
          },
          *s.strategy);
      if (fire) {
        s.done = true;
        --remaining;
        auto& o = out[k];
        o.stop_time = t;
        o.stop_discount = std::exp(-params.r * t);
        o.discounted_theft = theta != 0 ? theft : 0.0;
        o.final_belief = p;
        o.touched_lower_clamp = touched;
      }
    }
    if (remaining == 0 || i == n_steps) break;

    const double lambda = eq.lambda_star(p);
    const double rate = fraud_rate(fraud, lambda);
    if (theta != 0) {
      theft += discount * rate * dt;
      raw_theft += rate * dt;
    }
    if constexpr (kMixed) {
      double beta_rate = -1.0;
      for (auto& s : state) {
        if (s.done || !s.randomized) continue;
        if (beta_rate < 0.0) {
          const auto intensity = eq.beta(p);
          // p >= a was handled above, so the intensity is finite here.
          beta_rate = intensity.immediate ? 0.0 : intensity.rate;
        }
        s.gamma += beta_rate * dt;
      }
    }

    const double z = noise.normal();
    p = euler_step(p, lambda, theta, rate, dt, sqrt_dt, z, config.clamp_eps);
    if (p <= config.clamp_eps) touched = true;
    discount *= step_discount;
  }

  for (std::size_t k = 0; k < state.size(); ++k) {
    if (state[k].done) continue;
    auto& o = out[k];
    o.stop_time.reset();
    o.stop_discount = 0.0;
    o.discounted_theft = theta != 0 ? theft : 0.0;
    o.final_belief = p;
    o.truncated = true;
    o.touched_lower_clamp = touched;
  }
}

void validate_common(const ModelParams& params, const FraudStrategy& fraud, const PathConfig& config,
                     int theta) {
  params.validate();
  config.validate();
  validate(fraud);
  if (theta != 0 && theta != 1) throw std::domain_error("theta must be 0 or 1");
}

}  // namespace

PathConfig PathConfig::for_rate(double r) {
  PathConfig c;
  c.horizon = 12.0 / r;
  return c;
}

std::size_t PathConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

void PathConfig::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::domain_error("dt must be positive");
  if (!(std::isfinite(horizon) && horizon >= dt)) throw std::domain_error("horizon must be at least dt");
  if (!(clamp_eps > 0.0 && clamp_eps < 0.01)) throw std::domain_error("clamp_eps must lie in (0, 0.01)");
}

void PathTrace::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "time,P,Gamma,cumulative_theft\n";
  for (const auto& pt : points) {
    os << pt.time << ',' << pt.belief << ',' << pt.gamma << ',' << pt.cumulative_theft << '\n';
  }
  os.precision(old_precision);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t path_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() { return uniform_(engine_); }
double RngStream::exp1() { return exponential_(engine_); }
double RngStream::normal() { return normal_(engine_); }

double fraud_rate(const FraudStrategy& strategy, double lambda_star) {
  return std::visit(overloaded{
                        [&](const fraud::EquilibriumRate&) { return lambda_star; },
                        [&](const fraud::ConstantRate& s) { return s.rate; },
                        [&](const fraud::ScaledEquilibrium& s) { return s.scale * lambda_star; },
                        [&](const fraud::Null&) { return 0.0; },
                    },
                    strategy);
}

double belief_step(const Equilibrium& eq, double p, int theta, double rate, double dt, double z,
                   double clamp_eps) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("belief_step: belief must lie in (0, 1)");
  if (!(rate >= 0.0)) throw std::domain_error("belief_step: fraud rate must be non-negative");
  if (!(dt > 0.0)) throw std::domain_error("belief_step: dt must be positive");
  const double lambda = lambda_star(eq, p);
  return euler_step(p, lambda, theta, rate, dt, std::sqrt(dt), z, clamp_eps);
}

PathOutcome simulate_path(const ModelParams& params, const Equilibrium& eq, const FraudStrategy& fraud,
                          const StopperStrategy& stopper, int theta, const PathConfig& config,
                          NoiseSource& noise, PathTrace* trace) {
  validate_common(params, fraud, config, theta);
  validate(stopper);
  std::vector<PathOutcome> out;
  PathTrace* sink = (trace != nullptr && config.record_path) ? trace : nullptr;
  std::visit([&](const auto& e) { run_path(params, e, fraud, {&stopper, 1}, theta, config, noise, out, sink); },
             eq);
  return out.front();
}

std::vector<PathOutcome> simulate_path_multi(const ModelParams& params, const Equilibrium& eq,
                                             const FraudStrategy& fraud,
                                             std::span<const StopperStrategy> stoppers, int theta,
                                             const PathConfig& config, NoiseSource& noise) {
  validate_common(params, fraud, config, theta);
  for (const auto& s : stoppers) validate(s);
  std::vector<PathOutcome> out;
  std::visit([&](const auto& e) { run_path(params, e, fraud, stoppers, theta, config, noise, out, nullptr); },
             eq);
  return out;
}

}  // namespace fraudgame

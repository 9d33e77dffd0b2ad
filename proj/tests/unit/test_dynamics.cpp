#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fraudgame/dynamics.hpp"
#include "fraudgame/montecarlo.hpp"

using namespace fraudgame;

namespace {

const ModelParams kPure{0.05, 3.0, 0.3};
const ModelParams kMixed{0.05, 5.0, 0.3};

PathConfig short_config(double horizon = 20.0) {
  PathConfig c;
  c.horizon = horizon;
  return c;
}

// Noise with a fixed normal increment, for hand-checkable steps.
class ConstantNoise : public NoiseSource {
 public:
  explicit ConstantNoise(double z) : z_(z) {}
  double exp1() override { return 1.0; }
  double normal() override { return z_; }

 private:
  double z_;
};

// Drives a path at step 2 dt with the sums of consecutive pairs of a fine
// path's increments, so both paths see the same Brownian motion.
class CoarsenedNoise : public NoiseSource {
 public:
  explicit CoarsenedNoise(RngStream s) : s_(std::move(s)) {}
  double exp1() override { return s_.exp1(); }
  double normal() override { return (s_.normal() + s_.normal()) / std::sqrt(2.0); }

 private:
  RngStream s_;
};

}  // namespace

TEST_CASE("belief_step follows the Euler formula and clamps") {
  const auto eq = solve(kPure);
  const double p = 0.3;
  const double lam = lambda_star(eq, p);
  const double dt = 1e-3;
  const double z = 0.7;
  const double expected = p + lam * p * (1 - p) * (lam - lam * p) * dt - lam * p * (1 - p) * std::sqrt(dt) * z;
  CHECK(belief_step(eq, p, 1, lam, dt, z) == doctest::Approx(expected).epsilon(1e-15));
  // theta = 0 removes the fraud term from the drift.
  const double expected0 = p - lam * lam * p * p * (1 - p) * dt - lam * p * (1 - p) * std::sqrt(dt) * z;
  CHECK(belief_step(eq, p, 0, lam, dt, z) == doctest::Approx(expected0).epsilon(1e-15));
  CHECK(belief_step(eq, p, 1, lam, 1.0, 1e6) == 1e-9);
  CHECK(belief_step(eq, p, 1, lam, 1.0, -1e6) == 1.0 - 1e-9);
  CHECK_THROWS(belief_step(eq, 0.0, 1, lam, dt, z));
  CHECK_THROWS(belief_step(eq, 0.3, 1, -1.0, dt, z));
}

TEST_CASE("trivial paths") {
  const auto eq = solve(kPure);
  const auto config = short_config();
  RngStream s(1, 0);
  const auto idle = simulate_path(kPure, eq, fraud::Null{}, stopper::Never{}, 0, config, s);
  CHECK(idle.discounted_theft == 0.0);
  CHECK_FALSE(idle.stopped());
  CHECK(idle.truncated);
  CHECK(idle.stop_discount == 0.0);

  RngStream s2(1, 0);
  const auto at_once = simulate_path(kPure, eq, fraud::EquilibriumRate{}, stopper::Immediate{}, 1, config, s2);
  REQUIRE(at_once.stopped());
  CHECK(*at_once.stop_time == 0.0);
  CHECK(at_once.stop_discount == 1.0);
  CHECK(at_once.discounted_theft == 0.0);
}

TEST_CASE("theft is a left-point discounted sum") {
  const auto eq = solve(kPure);
  PathConfig c;
  c.dt = 0.01;
  c.horizon = 0.03;
  ConstantNoise zero(0.0);
  const auto o = simulate_path(kPure, eq, fraud::ConstantRate{2.0}, stopper::Never{}, 1, c, zero);
  const double d = std::exp(-kPure.r * c.dt);
  CHECK(o.discounted_theft == doctest::Approx(2.0 * c.dt * (1 + d + d * d)).epsilon(1e-14));
  CHECK(c.steps() == 3);
}

TEST_CASE("threshold stopper fires at the first grid point at or above the level") {
  const auto eq = solve(kPure);
  PathConfig c = short_config();
  c.record_path = true;
  RngStream s(7, 3);
  PathTrace trace;
  const auto o = simulate_path(kPure, eq, fraud::EquilibriumRate{}, stopper::Threshold{0.4}, 1, c, s, &trace);
  REQUIRE(o.stopped());
  REQUIRE(!trace.points.empty());
  CHECK(trace.points.back().belief >= 0.4);
  CHECK(trace.points.back().time == doctest::Approx(*o.stop_time));
  for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) CHECK(trace.points[i].belief < 0.4);
  CHECK(o.final_belief == trace.points.back().belief);
  std::ostringstream os;
  trace.write_csv(os);
  CHECK(os.str().rfind("time,P,Gamma,cumulative_theft\n", 0) == 0);
}

TEST_CASE("trace is recorded only on request") {
  const auto eq = solve(kPure);
  RngStream s(1, 1);
  PathTrace trace;
  simulate_path(kPure, eq, fraud::EquilibriumRate{}, stopper::Threshold{0.5}, 1, short_config(), s, &trace);
  CHECK(trace.points.empty());
}

TEST_CASE("streams are deterministic per (seed, index)") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    CHECK(x != c.normal());
  }
}

TEST_CASE("shared-path evaluation equals single-stopper runs") {
  const auto eq = solve(kMixed);
  const auto config = short_config(40.0);
  const std::vector<StopperStrategy> stoppers = {stopper::RandomizedIntensity{}, stopper::Threshold{0.6},
                                                 stopper::Threshold{0.86}, stopper::Never{}};
  for (int theta : {0, 1}) {
    RngStream shared(3, 11);
    const auto multi = simulate_path_multi(kMixed, eq, fraud::EquilibriumRate{}, stoppers, theta, config, shared);
    for (std::size_t k = 0; k < stoppers.size(); ++k) {
      RngStream own(3, 11);
      const auto single = simulate_path(kMixed, eq, fraud::EquilibriumRate{}, stoppers[k], theta, config, own);
      CHECK(single.stop_time == multi[k].stop_time);
      CHECK(single.discounted_theft == multi[k].discounted_theft);
      CHECK(single.final_belief == multi[k].final_belief);
    }
  }
}

TEST_CASE("randomized stopping is rejected in the pure regime") {
  const auto eq = solve(kPure);
  RngStream s(1, 0);
  CHECK_THROWS_AS(simulate_path(kPure, eq, fraud::EquilibriumRate{}, stopper::RandomizedIntensity{}, 1,
                                short_config(), s),
                  RegimeError);
}

TEST_CASE("randomized stopper stops for sure at a") {
  const auto eq = solve(kMixed);
  const double a = std::get<MixedEquilibrium>(eq).a();
  ModelParams start = kMixed;
  start.p = 0.95;
  RngStream s(1, 0);
  const auto o = simulate_path(start, eq, fraud::EquilibriumRate{}, stopper::RandomizedIntensity{}, 1,
                               short_config(), s);
  REQUIRE(o.stopped());
  CHECK(*o.stop_time == 0.0);
  CHECK(o.final_belief >= a);
}

TEST_CASE("path configuration is validated") {
  PathConfig c;
  CHECK(PathConfig::for_rate(0.05).horizon == doctest::Approx(240.0));
  CHECK(c.steps() == 240000);
  c.dt = 0.0;
  CHECK_THROWS(c.validate());
  c = PathConfig{};
  c.clamp_eps = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("equilibrium paths stop in finite time and rarely touch the clamp") {
  const auto eq = solve(kPure);
  const auto config = PathConfig::for_rate(kPure.r);
  const std::size_t n = 400;
  const StopperStrategy stop = stopper::Threshold{threshold_b(eq)};
  for (double p0 : {0.1, 0.3}) {
    ModelParams params = kPure;
    params.p = p0;
    const auto runs = run_paths(params, eq, fraud::EquilibriumRate{}, {&stop, 1}, ThetaMode::Active, n, config);
    std::size_t unstopped = 0;
    std::size_t touched = 0;
    for (const auto& o : runs[0]) {
      unstopped += o.stopped() ? 0 : 1;
      touched += o.touched_lower_clamp ? 1 : 0;
    }
    CAPTURE(p0);
    CHECK(static_cast<double>(unstopped) / n < 0.02);
    CHECK(static_cast<double>(touched) / n < 0.01);
  }
}

TEST_CASE("halving dt changes the mean theft by less than one standard error") {
  const auto eq = solve(kPure);
  const StopperStrategy stop = stopper::Threshold{threshold_b(eq)};
  PathConfig coarse = PathConfig::for_rate(kPure.r);
  coarse.dt = 0.02;
  PathConfig fine = coarse;
  fine.dt = 0.01;
  const std::size_t n = 1000;
  std::vector<double> coarse_theft(n);
  std::vector<double> fine_theft(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream fs(5, i);
    fine_theft[i] = simulate_path(kPure, eq, fraud::EquilibriumRate{}, stop, 1, fine, fs).discounted_theft;
    CoarsenedNoise cs(RngStream(5, i));
    coarse_theft[i] = simulate_path(kPure, eq, fraud::EquilibriumRate{}, stop, 1, coarse, cs).discounted_theft;
  }
  const auto c = summarize(coarse_theft, coarse);
  const auto f = summarize(fine_theft, fine);
  CAPTURE(c.mean);
  CAPTURE(f.mean);
  CHECK(std::fabs(c.mean - f.mean) < c.std_error);
}

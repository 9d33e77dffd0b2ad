#include <doctest.h>

#include <cmath>
#include <vector>

#include "fraudgame/montecarlo.hpp"

using namespace fraudgame;

namespace {

const ModelParams kPure{0.05, 3.0, 0.3};
const ModelParams kMixed{0.05, 5.0, 0.3};

PathConfig short_config(double horizon = 30.0, std::uint64_t seed = 1) {
  PathConfig c;
  c.dt = 2e-3;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

bool same(const PayoffEstimate& a, const PayoffEstimate& b) {
  return a.mean == b.mean && a.std_error == b.std_error && a.n_paths == b.n_paths;
}

}  // namespace

TEST_CASE("summarize") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const auto e = summarize(x, PathConfig{});
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt((1.5 * 1.5 * 2 + 0.5 * 0.5 * 2) / 3.0 / 4.0)));
  CHECK(e.n_paths == 4);
  CHECK_THROWS(summarize(std::vector<double>{1.0}, PathConfig{}));
}

TEST_CASE("trivial estimates") {
  const auto eq = solve(kPure);
  const auto c = short_config();
  const auto immediate = estimate_account_cost(kPure, eq, stopper::Immediate{}, fraud::EquilibriumRate{}, 50, c);
  CHECK(immediate.mean == kPure.M);
  CHECK(immediate.std_error == 0.0);
  CHECK(estimate_account_cost(kPure, eq, stopper::Never{}, fraud::Null{}, 50, c).mean == 0.0);
  CHECK(estimate_fraud_payoff_interim(kPure, eq, stopper::Never{}, fraud::Null{}, 50, c).mean == 0.0);
  CHECK(estimate_fraud_payoff_interim(kPure, eq, stopper::Immediate{}, fraud::EquilibriumRate{}, 50, c).mean == 0.0);
  CHECK(estimate_fraud_payoff_exante(kPure, eq, stopper::Never{}, fraud::Null{}, 50, c).mean == 0.0);
  CHECK_THROWS(estimate_account_cost(kPure, eq, stopper::Never{}, fraud::Null{}, 1, c));
}

TEST_CASE("ex ante payoff is p times the interim payoff") {
  const auto eq = solve(kPure);
  const auto c = short_config();
  const StopperStrategy stop = stopper::Threshold{threshold_b(eq)};
  const auto interim = estimate_fraud_payoff_interim(kPure, eq, stop, fraud::EquilibriumRate{}, 100, c);
  const auto exante = estimate_fraud_payoff_exante(kPure, eq, stop, fraud::EquilibriumRate{}, 100, c);
  CHECK(exante.mean == interim.mean * kPure.p);
  CHECK(exante.std_error == interim.std_error * kPure.p);
  ModelParams half = kPure;
  half.p = 0.5;
  const auto i2 = estimate_fraud_payoff_interim(half, eq, stop, fraud::EquilibriumRate{}, 100, c);
  CHECK(estimate_fraud_payoff_exante(half, eq, stop, fraud::EquilibriumRate{}, 100, c).mean == i2.mean / 2.0);
}

TEST_CASE("estimates are bit-identical for any worker count") {
  const auto eq = solve(kMixed);
  const auto c = short_config(20.0, 99);
  const StopperStrategy stop = stopper::RandomizedIntensity{};
  const auto one = estimate_account_cost(kMixed, eq, stop, fraud::EquilibriumRate{}, 64, c, {1});
  for (unsigned w : {2u, 3u, 8u}) {
    CAPTURE(w);
    CHECK(same(one, estimate_account_cost(kMixed, eq, stop, fraud::EquilibriumRate{}, 64, c, {w})));
  }
  CHECK_FALSE(same(one, estimate_account_cost(kMixed, eq, stop, fraud::EquilibriumRate{}, 64, short_config(20.0, 100))));
}

TEST_CASE("quadrupling the paths halves the standard error") {
  const auto eq = solve(kPure);
  const auto c = short_config(15.0);
  const StopperStrategy stop = stopper::Threshold{threshold_b(eq)};
  const auto small = estimate_fraud_payoff_interim(kPure, eq, stop, fraud::EquilibriumRate{}, 500, c);
  const auto large = estimate_fraud_payoff_interim(kPure, eq, stop, fraud::EquilibriumRate{}, 2000, c);
  CHECK(large.std_error / small.std_error == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("stopper sweep shares paths with the single-stopper estimator") {
  const auto eq = solve(kPure);
  const auto c = short_config();
  const double b = threshold_b(eq);
  const std::vector<double> levels = {0.5, b};
  const auto rows = deviation_sweep_stopper(kPure, eq, levels, 80, c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].level == b);
  CHECK(same(rows[1].cost, estimate_account_cost(kPure, eq, stopper::Threshold{b}, fraud::EquilibriumRate{}, 80, c)));
  CHECK_THROWS(deviation_sweep_stopper(kPure, eq, std::vector<double>{1.2}, 80, c));
}

TEST_CASE("fraud sweep uses common random numbers") {
  const auto eq = solve(kPure);
  const auto c = short_config();
  const std::vector<FraudStrategy> strategies = {fraud::EquilibriumRate{}, fraud::ScaledEquilibrium{1.0},
                                                 fraud::ConstantRate{0.0}};
  const auto rows = deviation_sweep_fraud(kPure, eq, strategies, 80, c);
  CHECK(same(rows[0].payoff, rows[1].payoff));
  CHECK(rows[2].payoff.mean == 0.0);
}

TEST_CASE("default deviation families") {
  const auto pure = solve(kPure);
  const double b = threshold_b(pure);
  const auto levels = default_threshold_levels(pure);
  CHECK(levels == std::vector<double>{0.8 * b, 0.9 * b, 1.1 * b, 0.5});
  const auto frauds = default_fraud_deviations(pure, 0.3);
  REQUIRE(frauds.size() == 4);
  CHECK(std::get<fraud::ConstantRate>(frauds[0]).rate == 0.5 * lambda_star(pure, 0.3));
  const auto mixed = solve(kMixed);
  for (double level : default_threshold_levels(mixed)) {
    CHECK(level > threshold_b(mixed));
    CHECK(level < std::get<MixedEquilibrium>(mixed).a());
  }
}

TEST_CASE("deviation tolerances") {
  PayoffEstimate eq{2.0, 0.01, 100, 1e-3, 240};
  CHECK(stopper_deviation_acceptable(eq, {1.98, 0.005, 100, 1e-3, 240}));
  CHECK_FALSE(stopper_deviation_acceptable(eq, {1.96, 0.005, 100, 1e-3, 240}));
  CHECK(fraud_deviation_acceptable(4.0, {4.1, 0.01, 100, 1e-3, 240}));
  CHECK_FALSE(fraud_deviation_acceptable(4.0, {4.2, 0.01, 100, 1e-3, 240}));
  CHECK(within_tolerance({4.07, 0.01, 100, 1e-3, 240}, 4.0, 0.08));
  CHECK_FALSE(within_tolerance({4.1, 0.01, 100, 1e-3, 240}, 4.0, 0.08));
}

TEST_CASE("filter calibration bins") {
  const auto eq = solve(kPure);
  PathConfig c;
  c.horizon = 1.0;
  const auto bins = filter_calibration(kPure, eq, 2000, 10, c);
  REQUIRE(bins.size() == 10);
  std::size_t total = 0;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    total += bins[k].count;
    if (k > 0) CHECK(bins[k].mean_belief >= bins[k - 1].mean_belief);
    CHECK(bins[k].mean_theta >= 0.0);
    CHECK(bins[k].mean_theta <= 1.0);
  }
  CHECK(total == 2000);
  CHECK_THROWS(filter_calibration(kPure, eq, 5, 10, c));
}

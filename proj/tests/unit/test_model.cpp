#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraudgame/model.hpp"
#include "oracles.hpp"

using namespace fraudgame;

TEST_CASE("m_hat") {
  CHECK(m_hat(0.05) == doctest::Approx(3.963327297606011).epsilon(1e-14));
  CHECK(m_hat(0.5) == doctest::Approx(oracle::m_hat(0.5)).epsilon(1e-15));
}

TEST_CASE("classification puts the boundary in the pure regime") {
  CHECK(classify({0.05, 3.0, 0.3}).kind == RegimeKind::Pure);
  CHECK(classify({0.05, 5.0, 0.3}).kind == RegimeKind::Mixed);
  CHECK(classify({0.05, m_hat(0.05), 0.3}).kind == RegimeKind::Pure);
  CHECK(classify({0.05, std::nextafter(m_hat(0.05), 10.0), 0.3}).kind == RegimeKind::Mixed);
  CHECK(to_string(RegimeKind::Mixed) == "mixed");
}

TEST_CASE("model parameters are validated") {
  CHECK_NOTHROW(ModelParams{0.05, 3.0, 0.3}.validate());
  CHECK_THROWS_AS((ModelParams{0.0, 3.0, 0.3}.validate()), std::domain_error);
  CHECK_THROWS_AS((ModelParams{0.05, -1.0, 0.3}.validate()), std::domain_error);
  CHECK_THROWS_AS((ModelParams{0.05, 3.0, 0.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((ModelParams{0.05, 3.0, 1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((ModelParams{std::nan(""), 3.0, 0.3}.validate()), std::domain_error);
}

TEST_CASE("strategy descriptors round trip") {
  for (const char* text : {"equilibrium", "null", "constant:0.25", "scaled:2"}) {
    CAPTURE(text);
    CHECK(to_string(parse_fraud_strategy(text)) == text);
  }
  for (const char* text : {"randomized", "immediate", "never", "threshold:0.5"}) {
    CAPTURE(text);
    CHECK(to_string(parse_stopper_strategy(text)) == text);
  }
  const double level = 0.1 + 0.2;
  const auto s = parse_stopper_strategy(to_string(StopperStrategy{stopper::Threshold{level}}));
  CHECK(std::get<stopper::Threshold>(s).level == level);
}

TEST_CASE("bad descriptors and parameters are rejected") {
  for (const char* text : {"", "constant", "constant:", "constant:-1", "scaled:x", "bogus", "constant:1e999"}) {
    CAPTURE(text);
    CHECK_THROWS(parse_fraud_strategy(text));
  }
  for (const char* text : {"threshold", "threshold:1", "threshold:0", "threshold:0.5x", "sometimes"}) {
    CAPTURE(text);
    CHECK_THROWS(parse_stopper_strategy(text));
  }
  CHECK_THROWS_AS(validate(FraudStrategy{fraud::ScaledEquilibrium{-1.0}}), std::domain_error);
  CHECK_THROWS_AS(validate(StopperStrategy{stopper::Threshold{1.5}}), std::domain_error);
}

TEST_CASE("RegimeError carries the bound") {
  const RegimeError e("wrong regime", 3.96);
  CHECK(e.m_hat() == 3.96);
}

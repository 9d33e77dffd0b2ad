#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace fraudgame {

/// Discount rate r, deactivation cost M and prior probability p that the
/// fraudster is active.
struct ModelParams {
  double r = 0.05;
  double M = 3.0;
  double p = 0.3;

  /// Throws std::domain_error unless r > 0, M > 0 and 0 < p < 1.
  void validate() const;
};

enum class RegimeKind { Pure, Mixed };

struct Regime {
  RegimeKind kind;
  double m_hat;
};

/// Raised when an operation is requested for the wrong equilibrium regime.
class RegimeError : public std::logic_error {
 public:
  RegimeError(const std::string& what, double m_hat)
      : std::logic_error(what), m_hat_(m_hat) {}
  double m_hat() const noexcept { return m_hat_; }

 private:
  double m_hat_;
};

/// Largest stopping cost with a pure-strategy equilibrium: sqrt(pi) / (2 sqrt(r)).
double m_hat(double r);

/// Pure iff M <= m_hat(r). The boundary belongs to the pure regime.
Regime classify(const ModelParams& params);

std::string_view to_string(RegimeKind kind);

// Fraud strategies. All are Markovian in the account holder's belief.
namespace fraud {
struct EquilibriumRate {};
struct ConstantRate {
  double rate = 0.0;
};
struct ScaledEquilibrium {
  double scale = 1.0;
};
struct Null {};
}  // namespace fraud

using FraudStrategy =
    std::variant<fraud::EquilibriumRate, fraud::ConstantRate, fraud::ScaledEquilibrium, fraud::Null>;

// Stopping strategies for the account holder.
namespace stopper {
struct Threshold {
  double level = 0.5;
};
/// The mixed-regime randomized stop: intensity beta on (b, a), sure stop at a.
struct RandomizedIntensity {};
struct Immediate {};
struct Never {};
}  // namespace stopper

using StopperStrategy =
    std::variant<stopper::Threshold, stopper::RandomizedIntensity, stopper::Immediate, stopper::Never>;

void validate(const FraudStrategy& strategy);
void validate(const StopperStrategy& strategy);

// Text descriptors used by config files and the command line:
//   fraud:   "equilibrium" | "constant:<rate>" | "scaled:<c>" | "null"
//   stopper: "threshold:<level>" | "randomized" | "immediate" | "never"
std::string to_string(const FraudStrategy& strategy);
std::string to_string(const StopperStrategy& strategy);
FraudStrategy parse_fraud_strategy(std::string_view text);
StopperStrategy parse_stopper_strategy(std::string_view text);

}  // namespace fraudgame

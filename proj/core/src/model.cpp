#include "fraudgame/model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fraudgame {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw std::invalid_argument("bad number '" + std::string(text) + "' in " + std::string(context));
  }
  return value;
}

std::pair<std::string_view, std::string_view> split_descriptor(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

}  // namespace

void ModelParams::validate() const {
  if (!(std::isfinite(r) && r > 0.0)) throw std::domain_error("discount rate r must be positive");
  if (!(std::isfinite(M) && M > 0.0)) throw std::domain_error("stopping cost M must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("prior p must lie in (0, 1)");
}

double m_hat(double r) {
  if (!(std::isfinite(r) && r > 0.0)) throw std::domain_error("m_hat: r must be positive");
  return std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(r));
}

Regime classify(const ModelParams& params) {
  const double bound = m_hat(params.r);
  return {params.M <= bound ? RegimeKind::Pure : RegimeKind::Mixed, bound};
}

std::string_view to_string(RegimeKind kind) { return kind == RegimeKind::Pure ? "pure" : "mixed"; }

void validate(const FraudStrategy& strategy) {
  std::visit(overloaded{
                 [](const fraud::ConstantRate& s) {
                   if (!(std::isfinite(s.rate) && s.rate >= 0.0))
                     throw std::domain_error("constant fraud rate must be finite and >= 0");
                 },
                 [](const fraud::ScaledEquilibrium& s) {
                   if (!(std::isfinite(s.scale) && s.scale > 0.0))
                     throw std::domain_error("fraud rate scale must be positive");
                 },
                 [](const auto&) {},
             },
             strategy);
}

void validate(const StopperStrategy& strategy) {
  if (const auto* t = std::get_if<stopper::Threshold>(&strategy)) {
    if (!(t->level > 0.0 && t->level < 1.0))
      throw std::domain_error("threshold level must lie in (0, 1)");
  }
}

std::string to_string(const FraudStrategy& strategy) {
  return std::visit(overloaded{
                        [](const fraud::EquilibriumRate&) -> std::string { return "equilibrium"; },
                        [](const fraud::ConstantRate& s) { return "constant:" + format_number(s.rate); },
                        [](const fraud::ScaledEquilibrium& s) { return "scaled:" + format_number(s.scale); },
                        [](const fraud::Null&) -> std::string { return "null"; },
                    },
                    strategy);
}

std::string to_string(const StopperStrategy& strategy) {
  return std::visit(overloaded{
                        [](const stopper::Threshold& s) { return "threshold:" + format_number(s.level); },
                        [](const stopper::RandomizedIntensity&) -> std::string { return "randomized"; },
                        [](const stopper::Immediate&) -> std::string { return "immediate"; },
                        [](const stopper::Never&) -> std::string { return "never"; },
                    },
                    strategy);
}

FraudStrategy parse_fraud_strategy(std::string_view text) {
  const auto [kind, arg] = split_descriptor(text);
  FraudStrategy out;
  if (kind == "equilibrium" && arg.empty()) {
    out = fraud::EquilibriumRate{};
  } else if (kind == "null" && arg.empty()) {
    out = fraud::Null{};
  } else if (kind == "constant") {
    out = fraud::ConstantRate{parse_number(arg, "constant fraud strategy")};
  } else if (kind == "scaled") {
    out = fraud::ScaledEquilibrium{parse_number(arg, "scaled fraud strategy")};
  } else {
    throw std::invalid_argument("unknown fraud strategy '" + std::string(text) + "'");
  }
  validate(out);
  return out;
}

StopperStrategy parse_stopper_strategy(std::string_view text) {
  const auto [kind, arg] = split_descriptor(text);
  StopperStrategy out;
  if (kind == "threshold") {
    out = stopper::Threshold{parse_number(arg, "threshold stopper")};
  } else if (kind == "randomized" && arg.empty()) {
    out = stopper::RandomizedIntensity{};
  } else if (kind == "immediate" && arg.empty()) {
    out = stopper::Immediate{};
  } else if (kind == "never" && arg.empty()) {
    out = stopper::Never{};
  } else {
    throw std::invalid_argument("unknown stopper strategy '" + std::string(text) + "'");
  }
  validate(out);
  return out;
}

}  // namespace fraudgame

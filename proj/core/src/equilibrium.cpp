#include "fraudgame/equilibrium.hpp"

namespace fraudgame {

Equilibrium solve(const ModelParams& params) {
  params.validate();
  if (classify(params).kind == RegimeKind::Pure) return build_pure(params.r, params.M);
  return build_mixed(params.r, params.M);
}

RegimeKind regime_of(const Equilibrium& eq) {
  return std::holds_alternative<PureEquilibrium>(eq) ? RegimeKind::Pure : RegimeKind::Mixed;
}

double value_fraudster(const Equilibrium& eq, double p) {
  return std::visit([p](const auto& e) { return e.v(p); }, eq);
}

double value_account(const Equilibrium& eq, double p) {
  return std::visit([p](const auto& e) { return e.u(p); }, eq);
}

double lambda_star(const Equilibrium& eq, double p) {
  return std::visit([p](const auto& e) { return e.lambda_star(p); }, eq);
}

StopIntensity beta(const Equilibrium& eq, double p) {
  if (const auto* mixed = std::get_if<MixedEquilibrium>(&eq)) return mixed->beta(p);
  return StopIntensity::finite(0.0);
}

double threshold_b(const Equilibrium& eq) {
  return std::visit([](const auto& e) { return e.b(); }, eq);
}

}  // namespace fraudgame

#pragma once

#include <variant>

#include "fraudgame/equilibrium_mixed.hpp"
#include "fraudgame/equilibrium_pure.hpp"
#include "fraudgame/model.hpp"

namespace fraudgame {

using Equilibrium = std::variant<PureEquilibrium, MixedEquilibrium>;

/// Builds the equilibrium of whichever regime (r, M) falls in.
Equilibrium solve(const ModelParams& params);

RegimeKind regime_of(const Equilibrium& eq);
double value_fraudster(const Equilibrium& eq, double p);
double value_account(const Equilibrium& eq, double p);
double lambda_star(const Equilibrium& eq, double p);
/// Zero everywhere in the pure regime.
StopIntensity beta(const Equilibrium& eq, double p);
double threshold_b(const Equilibrium& eq);

}  // namespace fraudgame

#pragma once

// Standard-normal kernel used throughout the equilibrium formulas.
//
// The survival function is evaluated through erfc rather than as 1 - cdf:
// the equilibrium value functions are defined by Psi(y) = q for q that can be
// far below machine epsilon, and 1 - cdf has no digits left there.

#include <numbers>

namespace fraudgame::gaussian {

inline constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

struct NormalTriple {
  double pdf;
  double cdf;
  double sf;
};

/// Density, distribution and survival at y. Throws std::domain_error on non-finite y.
NormalTriple normal_eval(double y);

double pdf(double y);
double cdf(double y);
/// Survival function Psi(y) = 1 - Phi(y), computed without cancellation.
double sf(double y);

/// Phi^{-1}(q) for q in (0, 1). Throws std::domain_error otherwise.
double quantile(double q);

/// Psi^{-1}(q), i.e. the y with sf(y) = q. Accurate for q down to the
/// smallest normal double because the lower tail is evaluated from q directly.
double inverse_sf(double q);

/// F(y) = phi(y) - y * Psi(y). Non-negative, decreasing from 1/sqrt(2 pi) at
/// y = 0 to 0 as y -> infinity, with F'(y) = -Psi(y).
double mills_F(double y);

}  // namespace fraudgame::gaussian

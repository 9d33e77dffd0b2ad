#pragma once

#include "fraudgame/model.hpp"

namespace fraudgame {

/// Closed-form pure-strategy equilibrium for M <= m_hat(r).
///
/// The account holder stops the first time the belief P reaches the threshold
/// b = M pi sqrt(r) / (sqrt(pi) + 2 M sqrt(r)); the active fraudster steals at
/// rate lambda*(P). Below b the fraudster's interim value v is defined by
///
///     Psi(sqrt(2r) v(p)) = (1 - b) p / (2 b (1 - p)),
///
/// and is evaluated through the inverse survival function so that it keeps
/// full precision as p -> 0. Immutable once built.
class PureEquilibrium {
 public:
  /// Throws RegimeError when M > m_hat(r), std::domain_error for r <= 0 or M <= 0.
  PureEquilibrium(double r, double M);

  double r() const noexcept { return r_; }
  double M() const noexcept { return M_; }
  double b() const noexcept { return b_; }

  /// Fraudster's interim value; zero on [b, 1).
  double v(double p) const;
  /// dv/dp on (0, b).
  double v_prime(double p) const;
  /// d2v/dp2 on (0, b), from differentiating v_prime.
  double v_second(double p) const;

  /// Account holder's expected cost; equals M on [b, 1).
  double u(double p) const;
  /// du/dp on (0, b). Tends to 0 at b (smooth fit).
  double u_prime(double p) const;

  /// Equilibrium fraud intensity. Continuous at b, where it equals 2 sqrt(r) / sqrt(pi).
  double lambda_star(double p) const;

  /// sqrt(2r) v(p) on (0, b); the argument at which the normal kernel is evaluated.
  double scaled_value(double p) const;

 private:
  double tail_probability(double p) const;

  double r_;
  double M_;
  double b_;
  double sqrt_2r_;
};

/// Builds the pure equilibrium; see PureEquilibrium::PureEquilibrium.
PureEquilibrium build_pure(double r, double M);

}  // namespace fraudgame

#pragma once

#include "fraudgame/model.hpp"

namespace fraudgame {

/// Stopping intensity with an explicit marker for "stop now". Integrators
/// never see a floating-point infinity.
struct StopIntensity {
  double rate = 0.0;
  bool immediate = false;

  static constexpr StopIntensity finite(double r) { return {r, false}; }
  static constexpr StopIntensity stop_now() { return {0.0, true}; }
};

/// f(z) = sqrt(2r) (M - z) F(sqrt(2r) z) - Psi(sqrt(2r) z).
///
/// For M > m_hat(r), f(0) > 0, f is strictly decreasing on (0, M/2) and
/// negative from there on, so it has exactly one positive root: the
/// fraudster's value at the lower boundary b.
double root_fn(double r, double M, double z);

/// Mixed-stopping equilibrium for M > m_hat(r).
///
/// Below b the account holder never stops; on (b, a) the stop comes with intensity
/// beta(P) = r M / (2 v(P)) - r, and at a it is certain. The account holder is indifferent
/// on [b, 1), where the cost is identically M.
class MixedEquilibrium {
 public:
  MixedEquilibrium(double r, double M, double v_b);

  double r() const noexcept { return r_; }
  double M() const noexcept { return M_; }
  double v_b() const noexcept { return v_b_; }
  double b() const noexcept { return b_; }
  double a() const noexcept { return a_; }
  /// 1 - a without cancellation.
  double one_minus_a() const noexcept { return one_minus_a_; }

  double v(double p) const;
  /// dv/dp on (0, a). The two branches agree at b.
  double v_prime(double p) const;
  double v_second(double p) const;

  /// Account holder's cost; M on (b, 1).
  double u(double p) const;
  /// du/dp on (0, b).
  double u_prime(double p) const;

  StopIntensity beta(double p) const;
  double lambda_star(double p) const;

  double scaled_value(double p) const;

 private:
  double tail_probability(double p) const;

  bool at_or_above_a(double p) const;

  double r_;
  double M_;
  double v_b_;
  double b_;
  double a_;
  double one_minus_a_;
  double sqrt_2r_;
  double tail_scale_;     // (1 - b) Psi(sqrt(2r) v_b) / b
  double u_weight_;       // (M - b v_b) / ((1 - b) F(sqrt(2r) v_b))
};

/// Solves for v(b) by bisection on (0, M/2) to interval width tol, then sets
/// b = sqrt(r) M Psi(y_b) / (sqrt(2) phi(y_b)) and a = 1 - (1 - b) exp(-r M v_b).
/// Throws RegimeError when M <= m_hat(r) and std::domain_error for tol > 1e-10.
MixedEquilibrium build_mixed(double r, double M, double tol = 1e-14);

}  // namespace fraudgame

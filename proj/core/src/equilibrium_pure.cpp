#include "fraudgame/equilibrium_pure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraudgame/gaussians.hpp"

namespace fraudgame {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;  // sqrt(pi)

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(what) + ": belief must lie in (0, 1)");
  }
}

}  // namespace

PureEquilibrium::PureEquilibrium(double r, double M) : r_(r), M_(M) {
  if (!(std::isfinite(M) && M > 0.0)) throw std::domain_error("stopping cost M must be positive");
  const double bound = m_hat(r);
  if (M > bound) {
    std::ostringstream os;
    os.precision(10);
    os << "M = " << M << " exceeds M_hat = " << bound
       << "; no pure equilibrium, use the mixed-stopping equilibrium";
    throw RegimeError(os.str(), bound);
  }
  const double sr = std::sqrt(r);
  b_ = M * std::numbers::pi * sr / (kSqrtPi + 2.0 * M * sr);
  sqrt_2r_ = std::sqrt(2.0 * r);
}

double PureEquilibrium::tail_probability(double p) const {
  return (1.0 - b_) * p / (2.0 * b_ * (1.0 - p));
}

double PureEquilibrium::scaled_value(double p) const {
  return gaussian::inverse_sf(tail_probability(p));
}

double PureEquilibrium::v(double p) const {
  require_open_unit(p, "v");
  if (p >= b_) return 0.0;
  return scaled_value(p) / sqrt_2r_;
}

double PureEquilibrium::v_prime(double p) const {
  if (!(p > 0.0 && p < b_)) throw std::domain_error("v_prime: belief must lie in (0, b)");
  const double y = scaled_value(p);
  const double one_minus = 1.0 - p;
  return -(1.0 - b_) / (2.0 * b_ * sqrt_2r_ * one_minus * one_minus * gaussian::pdf(y));
}

double PureEquilibrium::v_second(double p) const {
  const double vp = v_prime(p);
  const double y = scaled_value(p);
  // phi'(y) = -y phi(y) and dy/dp = sqrt(2r) v_p.
  return vp * (2.0 / (1.0 - p) + y * sqrt_2r_ * vp);
}

double PureEquilibrium::u(double p) const {
  require_open_unit(p, "u");
  if (p >= b_) return M_;
  const double y = scaled_value(p);
  const double weight = M_ * std::sqrt(2.0 * std::numbers::pi) * (1.0 - p) / (1.0 - b_);
  return p * (y / sqrt_2r_) + weight * gaussian::mills_F(y);
}

double PureEquilibrium::u_prime(double p) const {
  if (!(p > 0.0 && p < b_)) throw std::domain_error("u_prime: belief must lie in (0, b)");
  const double y = scaled_value(p);
  const double value = y / sqrt_2r_;
  const double vp = v_prime(p);
  const double scale = M_ * std::sqrt(2.0 * std::numbers::pi) / (1.0 - b_);
  return value + p * vp - scale * (gaussian::mills_F(y) + (1.0 - p) * gaussian::sf(y) * sqrt_2r_ * vp);
}

double PureEquilibrium::lambda_star(double p) const {
  require_open_unit(p, "lambda_star");
  if (p >= b_) return 2.0 * b_ * std::sqrt(r_) / (p * kSqrtPi);
  // -1 / (p (1-p) v_p) rewritten with Psi(y) = q, which avoids forming v_p.
  const double q = tail_probability(p);
  return sqrt_2r_ * gaussian::pdf(gaussian::inverse_sf(q)) / q;
}

PureEquilibrium build_pure(double r, double M) { return PureEquilibrium(r, M); }

}  // namespace fraudgame

#include "fraudgame/equilibrium_mixed.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraudgame/gaussians.hpp"

namespace fraudgame {

namespace {

constexpr int kMaxBisections = 200;

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(what) + ": belief must lie in (0, 1)");
  }
}

}  // namespace

double root_fn(double r, double M, double z) {
  const double s = std::sqrt(2.0 * r);
  return s * (M - z) * gaussian::mills_F(s * z) - gaussian::sf(s * z);
}

MixedEquilibrium::MixedEquilibrium(double r, double M, double v_b) : r_(r), M_(M), v_b_(v_b) {
  const double bound = m_hat(r);
  if (!(M > bound)) {
    std::ostringstream os;
    os.precision(10);
    os << "M = " << M << " does not exceed M_hat = " << bound
       << "; use the pure equilibrium";
    throw RegimeError(os.str(), bound);
  }
  if (!(v_b > 0.0 && v_b < 0.5 * M)) {
    throw std::domain_error("v(b) must lie in (0, M/2)");
  }
  sqrt_2r_ = std::sqrt(2.0 * r);
  const double y_b = sqrt_2r_ * v_b;
  const double psi_b = gaussian::sf(y_b);
  b_ = std::sqrt(r) * M * psi_b / (std::numbers::sqrt2 * gaussian::pdf(y_b));
  if (!(b_ > 0.0 && b_ < 1.0)) {
    throw std::runtime_error("mixed equilibrium: lower boundary outside (0, 1)");
  }
  // 1 - a is kept separately: for large M it is far below machine epsilon and
  // a itself rounds to 1.
  one_minus_a_ = (1.0 - b_) * std::exp(-r * M * v_b);
  a_ = 1.0 - one_minus_a_;
  tail_scale_ = (1.0 - b_) * psi_b / b_;
  u_weight_ = (M - b_ * v_b) / ((1.0 - b_) * gaussian::mills_F(y_b));
}

bool MixedEquilibrium::at_or_above_a(double p) const {
  return p >= a_ || 1.0 - p <= one_minus_a_;
}

double MixedEquilibrium::tail_probability(double p) const {
  return tail_scale_ * p / (1.0 - p);
}

double MixedEquilibrium::scaled_value(double p) const {
  return gaussian::inverse_sf(tail_probability(p));
}

double MixedEquilibrium::v(double p) const {
  require_open_unit(p, "v");
  if (p <= b_) return scaled_value(p) / sqrt_2r_;
  // Denominator (1 - a): the only choice giving v(a) = 0 and continuity at b.
  if (!at_or_above_a(p)) return std::log((1.0 - p) / one_minus_a_) / (r_ * M_);
  return 0.0;
}

double MixedEquilibrium::v_prime(double p) const {
  if (!(p > 0.0) || at_or_above_a(p)) throw std::domain_error("v_prime: belief must lie in (0, a)");
  if (p <= b_) {
    const double y = scaled_value(p);
    const double one_minus = 1.0 - p;
    return -tail_scale_ / (sqrt_2r_ * one_minus * one_minus * gaussian::pdf(y));
  }
  return -1.0 / (r_ * M_ * (1.0 - p));
}

double MixedEquilibrium::v_second(double p) const {
  const double vp = v_prime(p);
  if (p <= b_) {
    const double y = scaled_value(p);
    return vp * (2.0 / (1.0 - p) + y * sqrt_2r_ * vp);
  }
  return vp / (1.0 - p);
}

double MixedEquilibrium::u(double p) const {
  require_open_unit(p, "u");
  if (p >= b_) return M_;
  const double y = scaled_value(p);
  return p * (y / sqrt_2r_) + u_weight_ * (1.0 - p) * gaussian::mills_F(y);
}

double MixedEquilibrium::u_prime(double p) const {
  if (!(p > 0.0 && p < b_)) throw std::domain_error("u_prime: belief must lie in (0, b)");
  const double y = scaled_value(p);
  const double vp = v_prime(p);
  return y / sqrt_2r_ + p * vp -
         u_weight_ * (gaussian::mills_F(y) + (1.0 - p) * gaussian::sf(y) * sqrt_2r_ * vp);
}

StopIntensity MixedEquilibrium::beta(double p) const {
  require_open_unit(p, "beta");
  if (p <= b_) return StopIntensity::finite(0.0);
  if (at_or_above_a(p)) return StopIntensity::stop_now();
  return StopIntensity::finite(r_ * M_ / (2.0 * v(p)) - r_);
}

double MixedEquilibrium::lambda_star(double p) const {
  require_open_unit(p, "lambda_star");
  if (p > b_) return r_ * M_ / p;
  const double q = tail_probability(p);
  return sqrt_2r_ * gaussian::pdf(gaussian::inverse_sf(q)) / q;
}

MixedEquilibrium build_mixed(double r, double M, double tol) {
  if (!(tol > 0.0 && tol <= 1e-10)) throw std::domain_error("build_mixed: tol must lie in (0, 1e-10]");
  const double bound = m_hat(r);
  if (!(M > bound)) {
    std::ostringstream os;
    os.precision(10);
    os << "M = " << M << " does not exceed M_hat = " << bound << "; use the pure equilibrium";
    throw RegimeError(os.str(), bound);
  }

  double lo = 0.0;
  double hi = 0.5 * M;
  if (!(root_fn(r, M, lo) > 0.0 && root_fn(r, M, hi) < 0.0)) {
    throw std::runtime_error("build_mixed: root of the boundary equation is not bracketed");
  }
  for (int i = 0; i < kMaxBisections && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (root_fn(r, M, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v_b = 0.5 * (lo + hi);
  return MixedEquilibrium(r, M, v_b);
}

}  // namespace fraudgame

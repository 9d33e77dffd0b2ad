#pragma once

// Reference implementations used only by the tests. They rely on std::erfc,
// std::exp and plain bisection, never on the library's own special functions.

#include <cmath>
#include <numbers>

namespace oracle {

inline double sf(double y) { return 0.5 * std::erfc(y / std::numbers::sqrt2); }
inline double pdf(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }
inline double F(double y) { return pdf(y) - y * sf(y); }

template <class Fn>
double bisect(Fn f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double cdf(double y) { return 0.5 * std::erfc(-y / std::numbers::sqrt2); }

// y with sf(y) = q. Compares logs of whichever tail is small, so the root is
// resolved to full precision at both ends. 1 - q is exact for q >= 1/2.
inline double inverse_sf(double q) {
  if (q < 0.5) return bisect([q](double y) { return std::log(sf(y)) - std::log(q); }, -40.0, 40.0, 400);
  return bisect([q](double y) { return std::log(1.0 - q) - std::log(cdf(y)); }, -40.0, 40.0, 400);
}

inline double m_hat(double r) { return std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(r)); }

// Pure regime straight from the closed form.
struct Pure {
  double r, M, b;
  Pure(double r_, double M_)
      : r(r_), M(M_), b(M_ * std::numbers::pi * std::sqrt(r_) / (std::sqrt(std::numbers::pi) + 2.0 * M_ * std::sqrt(r_))) {}
  double y(double p) const { return inverse_sf((1.0 - b) * p / (2.0 * b * (1.0 - p))); }
  double v(double p) const { return p < b ? y(p) / std::sqrt(2.0 * r) : 0.0; }
  double u(double p) const {
    if (p >= b) return M;
    return p * v(p) + M * std::sqrt(2.0 * std::numbers::pi) * (1.0 - p) / (1.0 - b) * F(y(p));
  }
};

// v_b by bisection on f(z) = sqrt(2r)(M - z) F(sqrt(2r) z) - Psi(sqrt(2r) z) over (0, M/2).
inline double mixed_v_b(double r, double M) {
  const double s = std::sqrt(2.0 * r);
  return bisect([&](double z) { return s * (M - z) * F(s * z) - sf(s * z); }, 0.0, 0.5 * M, 200);
}

}  // namespace oracle

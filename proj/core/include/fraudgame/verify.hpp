#pragma once

// Analytic verification of an equilibrium: ODE residuals under finite
// differences, boundary and smooth-fit conditions, the HJB inequality and the
// normal-tail inequalities the construction relies on.
//
// Failures are recorded in the report, never thrown.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraudgame/equilibrium.hpp"

namespace fraudgame {

struct CheckEntry {
  std::string name;
  /// What `statistic` measures, e.g. "max |residual|".
  std::string measure;
  double statistic = 0.0;
  double tolerance = 0.0;
  std::string grid;
  bool passed = false;
};

struct VerifyReport {
  RegimeKind regime = RegimeKind::Pure;
  std::vector<CheckEntry> checks;

  bool passed() const;
  const CheckEntry* find(const std::string& name) const;
  void append(const VerifyReport& other);
};

/// Every equilibrium invariant for the regime of `eq`, on uniform grids of
/// `grid_size` points (at least 100).
VerifyReport residual_suite(const Equilibrium& eq, std::size_t grid_size = 1000);

/// Max over the grids of the HJB expression
///   (l*)^2 p^2 (1-p)^2 v_pp / 2 - (l*)^2 p^2 (1-p) v_p + l* p (1-p) l v_p - (r + beta) v + l,
/// which must be <= 1e-8 for every l >= 0 and vanish at l = l*(p).
CheckEntry hjb_scan(const Equilibrium& eq, std::span<const double> p_grid, std::span<const double> lambda_grid);

/// Mills-ratio inequality, the two tail bounds and the ratio used in the
/// non-explosion argument, on fixed grids.
VerifyReport inequality_scan();

/// Names residual_suite reports for a regime, in order.
std::vector<std::string> expected_check_names(RegimeKind regime);

std::string to_json(const VerifyReport& report, int indent = 2);
void write_table(std::ostream& os, const VerifyReport& report);

// Finite-difference helpers, fourth order, central.
template <class F>
double fd_first(const F& f, double x, double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

template <class F>
double fd_second(const F& f, double x, double h) {
  return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
}

/// n points evenly spaced on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace fraudgame

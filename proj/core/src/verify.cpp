#include "fraudgame/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "fraudgame/gaussians.hpp"

namespace fraudgame {

namespace {

constexpr double kOdeTol = 1e-6;
constexpr double kHjbTol = 1e-8;
constexpr double kFirstOrderTol = 1e-10;
constexpr double kSmoothFitTol = 1e-8;
constexpr double kRootTol = 1e-10;
constexpr double kFdRelTol = 1e-6;
constexpr double kShapeTol = 1e-12;
constexpr double kLambdaMax = 100.0;
constexpr std::size_t kLambdaPoints = 1001;

// Finite-difference step as a fraction of the distance from p to the nearer
// end of its smooth branch. v blows up at 0, so a step tied to the branch
// length alone leaves a large truncation error at small p.
constexpr double kFdFraction = 1e-3;

std::string describe_grid(double lo, double hi, std::size_t n) {
  std::ostringstream os;
  os.precision(6);
  os << n << " points on [" << lo << ", " << hi << "]";
  return os.str();
}

CheckEntry at_most(std::string name, std::string measure, double statistic, double tol, std::string grid) {
  return {std::move(name), std::move(measure), statistic, tol, std::move(grid),
          std::isfinite(statistic) && statistic <= tol};
}

CheckEntry at_least(std::string name, std::string measure, double statistic, double bound, std::string grid) {
  return {std::move(name), std::move(measure), statistic, bound, std::move(grid),
          std::isfinite(statistic) && statistic >= bound};
}

template <class Fn>
double max_over(std::span<const double> grid, Fn fn) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double v = fn(x);
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, v);
  }
  return m;
}

template <class Fn>
double max_abs_over(std::span<const double> grid, Fn fn) {
  return max_over(grid, [&](double x) { return std::fabs(fn(x)); });
}

// Smooth branch containing p, used to scale the finite-difference step.
struct Branch {
  double lo;
  double hi;
};

Branch branch_of(const Equilibrium& eq, double p) {
  if (const auto* m = std::get_if<MixedEquilibrium>(&eq)) {
    if (p > m->b()) return {m->b(), m->a()};
    return {0.0, m->b()};
  }
  return {0.0, std::get<PureEquilibrium>(eq).b()};
}

double fd_step(const Equilibrium& eq, double p) {
  const auto br = branch_of(eq, p);
  return kFdFraction * std::min(p - br.lo, br.hi - p);
}

// The quantities every residual check needs at one grid point.
// Second derivatives are differences of the analytic first derivatives, which
// v_prime_matches_fd / u_prime_matches_fd check against differences of the
// values. Differencing the values twice loses too many digits on the narrow
// band (b, a).
struct PointData {
  double v;
  double v_p;
  double v_pp_fd;
  double u;
  double u_pp_fd;
  double lambda;
  double beta;
};

template <class E>
PointData point_data(const Equilibrium& eq, const E& e, double p) {
  const double h = fd_step(eq, p);
  const auto v_p = [&](double x) { return e.v_prime(x); };
  double beta_rate = 0.0;
  double u_pp = 0.0;
  if constexpr (std::is_same_v<E, MixedEquilibrium>) beta_rate = e.beta(p).rate;
  if (p < e.b()) {
    const auto u_p = [&](double x) { return e.u_prime(x); };
    u_pp = fd_first(u_p, p, h);
  }
  return {e.v(p), e.v_prime(p), fd_first(v_p, p, h), e.u(p), u_pp, e.lambda_star(p), beta_rate};
}

template <class E>
double fraudster_ode_residual(const Equilibrium& eq, const E& e, double p) {
  const auto d = point_data(eq, e, p);
  return d.v_pp_fd / (2.0 * d.v_p) - (e.r() + d.beta) * d.v * d.v_p - 1.0 / (1.0 - p);
}

template <class E>
double account_ode_residual(const Equilibrium& eq, const E& e, double p) {
  const auto d = point_data(eq, e, p);
  const double s = d.lambda * p * (1.0 - p);
  return 0.5 * s * s * d.u_pp_fd - e.r() * d.u + p * d.lambda;
}

// HJB expression at intensity `lambda`, given the point data at p.
double hjb_expression(const PointData& d, double r, double p, double lambda) {
  const double ls = d.lambda;
  return 0.5 * ls * ls * p * p * (1.0 - p) * (1.0 - p) * d.v_pp_fd - ls * ls * p * p * (1.0 - p) * d.v_p +
         ls * p * (1.0 - p) * lambda * d.v_p - (r + d.beta) * d.v + lambda;
}

template <class E>
double second_difference_max(const E& e, std::span<const double> grid) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    worst = std::max(worst, e.u(grid[i - 1]) - 2.0 * e.u(grid[i]) + e.u(grid[i + 1]));
  }
  return worst;
}

template <class E>
void common_value_checks(VerifyReport& report, const Equilibrium& eq, const E& e, std::span<const double> inner,
                         const std::string& inner_desc, std::size_t n) {
  const double b = e.b();
  const double r = e.r();

  report.checks.push_back(at_most("first_order_condition", "max |lambda* p (1-p) v_p + 1|",
                                  max_abs_over(inner, [&](double p) {
                                    return e.lambda_star(p) * p * (1.0 - p) * e.v_prime(p) + 1.0;
                                  }),
                                  kFirstOrderTol, inner_desc));

  report.checks.push_back(at_most("fraudster_ode", "max |v_pp/(2 v_p) - r v v_p - 1/(1-p)|",
                                  max_abs_over(inner, [&](double p) { return fraudster_ode_residual(eq, e, p); }),
                                  kOdeTol, inner_desc));

  report.checks.push_back(at_most("account_ode", "max |(l* p (1-p))^2 u_pp / 2 - r u + p l*|",
                                  max_abs_over(inner, [&](double p) { return account_ode_residual(eq, e, p); }),
                                  kOdeTol, inner_desc));

  report.checks.push_back(at_most("v_prime_matches_fd", "max relative |v_p - FD(v)|",
                                  max_abs_over(inner, [&](double p) {
                                    const auto v = [&](double x) { return e.v(x); };
                                    const double fd = fd_first(v, p, fd_step(eq, p));
                                    return (e.v_prime(p) - fd) / std::fabs(e.v_prime(p));
                                  }),
                                  kFdRelTol, inner_desc));

  report.checks.push_back(at_most("u_prime_matches_fd", "max |u_p - FD(u)| / max(1, |u_p|)",
                                  max_abs_over(inner, [&](double p) {
                                    const auto u = [&](double x) { return e.u(x); };
                                    const double fd = fd_first(u, p, fd_step(eq, p));
                                    return (e.u_prime(p) - fd) / std::max(1.0, std::fabs(e.u_prime(p)));
                                  }),
                                  kFdRelTol, inner_desc));

  // Monotonicity and concavity below b.
  const auto below_b = uniform_grid(b * 1e-3, b * (1.0 - 1e-3), n);
  const std::string below_desc = describe_grid(below_b.front(), below_b.back(), n);
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < below_b.size(); ++i) {
    worst_increase = std::max(worst_increase, e.v(below_b[i]) - e.v(below_b[i - 1]));
  }
  report.checks.push_back(at_most("v_decreasing", "max v(p_{i+1}) - v(p_i)", worst_increase, -0.0, below_desc));
  report.checks.push_back(at_most("u_concave", "max second difference of u", second_difference_max(e, below_b),
                                  kShapeTol, below_desc));

  const auto whole = uniform_grid(1e-3, 1.0 - 1e-3, n);
  report.checks.push_back(at_most("u_le_M", "max u(p) - M", max_over(whole, [&](double p) { return e.u(p) - e.M(); }),
                                  kShapeTol, describe_grid(whole.front(), whole.back(), n)));

  report.checks.push_back(at_least("lambda_positive", "min lambda*(p)",
                                   -max_over(whole, [&](double p) { return -e.lambda_star(p); }),
                                   std::numeric_limits<double>::min(),
                                   describe_grid(whole.front(), whole.back(), n)));

  report.checks.push_back(at_most("smooth_fit", "|u_p(b-)|", std::fabs(e.u_prime(b * (1.0 - 1e-12))), kSmoothFitTol,
                                  "p = b (1 - 1e-12)"));

  const double tiny = 1e-8;
  report.checks.push_back(at_most("u_at_zero", "u(1e-8)", e.u(tiny), 1e-4, "p = 1e-8"));
  report.checks.push_back(at_least("v_unbounded_at_zero", "v(1e-8) sqrt(2r)", e.v(tiny) * std::sqrt(2.0 * r), 5.0,
                                   "p = 1e-8"));
  report.checks.push_back(at_most("u_at_b", "|u(b) - M|", std::fabs(e.u(b) - e.M()), kShapeTol, "p = b"));
}

// Grid on which the HJB expression is scanned: every smooth branch where the
// fraudster is still active, pulled in from the endpoints.
std::vector<double> hjb_grid(const Equilibrium& eq, std::size_t n) {
  if (const auto* m = std::get_if<MixedEquilibrium>(&eq)) {
    auto g = uniform_grid(0.01, m->b() - 0.01, n);
    const auto upper = uniform_grid(m->b() + 0.001, m->a() - 0.001, n);
    g.insert(g.end(), upper.begin(), upper.end());
    return g;
  }
  const double b = std::get<PureEquilibrium>(eq).b();
  return uniform_grid(0.01, b - 0.01, n);
}

VerifyReport pure_suite(const Equilibrium& eq, const PureEquilibrium& e, std::size_t n) {
  VerifyReport report;
  report.regime = RegimeKind::Pure;
  const double b = e.b();
  const double r = e.r();
  const double M = e.M();

  const auto inner = uniform_grid(0.01, b - 0.01, n);
  const std::string inner_desc = describe_grid(inner.front(), inner.back(), n);
  common_value_checks(report, eq, e, inner, inner_desc, n);

  const auto lambdas = uniform_grid(0.0, kLambdaMax, kLambdaPoints);
  report.checks.push_back(hjb_scan(eq, hjb_grid(eq, n), lambdas));

  report.checks.push_back(at_most("v_at_b", "|v(b)|", std::fabs(e.v(b)), 0.0, "p = b"));

  const double slack = -r * M + 2.0 * b * std::sqrt(r) / std::sqrt(std::numbers::pi);
  const double slack_closed = r * M * (std::sqrt(std::numbers::pi) - 2.0 * std::sqrt(r) * M) /
                              (std::sqrt(std::numbers::pi) + 2.0 * M * std::sqrt(r));
  report.checks.push_back(at_least("stopping_region_slack", "-rM + 2 b sqrt(r)/sqrt(pi)", slack, -1e-15, "(b, 1)"));
  report.checks.push_back(at_most("stopping_region_slack_closed_form", "|slack - closed form|",
                                  std::fabs(slack - slack_closed), 1e-14, "(b, 1)"));
  report.checks.push_back(at_most("b_le_pi_over_4", "b - pi/4", b - std::numbers::pi / 4.0, 1e-15, "-"));

  const double lam_left = e.lambda_star(b * (1.0 - 1e-12));
  report.checks.push_back(at_most("lambda_continuity", "|lambda*(b-) - lambda*(b)|",
                                  std::fabs(lam_left - e.lambda_star(b)), 1e-8, "p = b"));
  return report;
}

VerifyReport mixed_suite(const Equilibrium& eq, const MixedEquilibrium& e, std::size_t n) {
  VerifyReport report;
  report.regime = RegimeKind::Mixed;
  const double b = e.b();
  const double a = e.a();
  const double r = e.r();
  const double M = e.M();
  const double v_b = e.v_b();

  report.checks.push_back(at_most("root_residual", "|f(v_b)|", std::fabs(root_fn(r, M, v_b)), kRootTol, "z = v_b"));
  report.checks.push_back(at_most("v_b_in_range", "v_b / (M/2)", v_b > 0.0 ? v_b / (0.5 * M) : 1.0,
                                  1.0 - 1e-15, "(0, M/2)"));
  report.checks.push_back(at_most("b_below_one", "b", b, 1.0 - 1e-15, "-"));
  report.checks.push_back(at_least("a_in_range", "min(a - b, 1 - a)", std::min(a - b, 1.0 - a), 1e-15, "-"));

  {
    // b < 1 across cost levels above the bound for several discount rates.
    double worst = 0.0;
    std::size_t count = 0;
    for (double rr : {0.01, 0.05, 0.5}) {
      const double lo = m_hat(rr);
      for (double mm : uniform_grid(lo, 10.0 * lo, 50)) {
        if (mm <= lo) continue;
        worst = std::max(worst, build_mixed(rr, mm).b());
        ++count;
      }
    }
    report.checks.push_back(at_most("b_below_one_grid", "max b", worst, 1.0 - 1e-15,
                                    std::to_string(count) + " (r, M) pairs, r in {0.01, 0.05, 0.5}, M in (M_hat, 10 M_hat]"));
  }

  const double sqrt_2r = std::sqrt(2.0 * r);
  const double left_at_b = e.scaled_value(b) / sqrt_2r;
  const double right_at_b = std::log((1.0 - b) / (1.0 - a)) / (r * M);
  report.checks.push_back(at_most("v_continuity", "max(|v(b-) - v_b|, |v(b+) - v_b|, |v(a)|)",
                                  std::max({std::fabs(left_at_b - v_b), std::fabs(right_at_b - v_b), std::fabs(e.v(a))}),
                                  1e-10, "p in {b, a}"));

  report.checks.push_back(at_most("v_prime_continuity", "|v_p(b-) + 1/(rM(1-b))|",
                                  std::fabs(e.v_prime(b) + 1.0 / (r * M * (1.0 - b))), 1e-8, "p = b"));

  const auto inner = uniform_grid(0.01, b - 0.01, n);
  const std::string inner_desc = describe_grid(inner.front(), inner.back(), n);
  common_value_checks(report, eq, e, inner, inner_desc, n);

  const auto band = uniform_grid(b + 0.001, a - 0.001, n);
  const std::string band_desc = describe_grid(band.front(), band.back(), n);

  report.checks.push_back(at_most("nonlinear_ode", "max |v_pp/(2 v_p) - (r + beta) v v_p - 1/(1-p)|",
                                  max_abs_over(band, [&](double p) { return fraudster_ode_residual(eq, e, p); }),
                                  kOdeTol, band_desc));

  report.checks.push_back(at_most("indifference", "max |p lambda*(p) - rM|",
                                  max_abs_over(band, [&](double p) { return p * e.lambda_star(p) - r * M; }),
                                  kShapeTol, band_desc));

  {
    double min_beta = std::numeric_limits<double>::infinity();
    double worst_drop = -std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (std::size_t i = 0; i < band.size(); ++i) {
      const double bt = e.beta(band[i]).rate;
      min_beta = std::min(min_beta, bt);
      if (i > 0) worst_drop = std::max(worst_drop, prev - bt);
      prev = bt;
    }
    report.checks.push_back(at_least("beta_positive", "min beta on (b, a)", min_beta,
                                     std::numeric_limits<double>::min(), band_desc));
    report.checks.push_back(at_most("beta_nondecreasing", "max beta(p_i) - beta(p_{i+1})", worst_drop, 0.0, band_desc));
  }

  report.checks.push_back(at_most("u_equals_M_above_b", "max |u(p) - M| on (b, 1)",
                                  max_abs_over(uniform_grid(b + 1e-9, 1.0 - 1e-9, n),
                                               [&](double p) { return e.u(p) - M; }),
                                  0.0, describe_grid(b + 1e-9, 1.0 - 1e-9, n)));

  const auto lambdas = uniform_grid(0.0, kLambdaMax, kLambdaPoints);
  report.checks.push_back(hjb_scan(eq, hjb_grid(eq, n), lambdas));
  return report;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.passed; });
}

const CheckEntry* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void VerifyReport::append(const VerifyReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

CheckEntry hjb_scan(const Equilibrium& eq, std::span<const double> p_grid, std::span<const double> lambda_grid) {
  double worst = -std::numeric_limits<double>::infinity();
  double worst_equality = 0.0;
  std::visit(
      [&](const auto& e) {
        for (double p : p_grid) {
          const auto d = point_data(eq, e, p);
          for (double lam : lambda_grid) worst = std::max(worst, hjb_expression(d, e.r(), p, lam));
          worst_equality = std::max(worst_equality, std::fabs(hjb_expression(d, e.r(), p, d.lambda)));
        }
      },
      eq);
  std::ostringstream grid;
  grid << p_grid.size() << " beliefs x " << lambda_grid.size() << " intensities in [" << lambda_grid.front() << ", "
       << lambda_grid.back() << "]";
  CheckEntry entry{"hjb_scan", "max HJB expression; max |HJB at lambda*|", std::max(worst, worst_equality),
                   kHjbTol, grid.str(), false};
  entry.passed = std::isfinite(worst) && worst <= kHjbTol && worst_equality <= kHjbTol;
  return entry;
}

VerifyReport residual_suite(const Equilibrium& eq, std::size_t grid_size) {
  if (grid_size < 100) throw std::domain_error("residual_suite: grid_size must be at least 100");
  if (const auto* p = std::get_if<PureEquilibrium>(&eq)) return pure_suite(eq, *p, grid_size);
  return mixed_suite(eq, std::get<MixedEquilibrium>(eq), grid_size);
}

VerifyReport inequality_scan() {
  using namespace gaussian;
  VerifyReport report;
  constexpr std::size_t kPoints = 10000;
  std::vector<double> z(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) z[i] = 10.0 * static_cast<double>(i + 1) / kPoints;
  const std::string zdesc = "10000 points on (0, 10]";

  report.checks.push_back(at_least("mills_inequality", "min 2 R^2 - 3 z R + z^2 - 1, R = phi/Psi",
                                   -max_over(z, [](double x) {
                                     const double ratio = pdf(x) / sf(x);
                                     return -((ratio - x) * (2.0 * ratio - x) - 1.0);
                                   }),
                                   std::numeric_limits<double>::min(), zdesc));

  report.checks.push_back(at_most("tail_bound_z_phi", "max z phi(z) - (1 + z^2) Psi(z)",
                                  max_over(z, [](double x) { return x * pdf(x) - (1.0 + x * x) * sf(x); }), 0.0,
                                  zdesc));

  report.checks.push_back(at_most("tail_bound_z_psi", "max z Psi(z) - phi(z)",
                                  max_over(z, [](double x) { return x * sf(x) - pdf(x); }), 0.0, zdesc));

  const auto fgrid = uniform_grid(0.0, 40.0, kPoints);
  report.checks.push_back(at_least("mills_F_nonnegative", "min F(y)",
                                   -max_over(fgrid, [](double y) { return -mills_F(y); }), 0.0,
                                   "10000 points on [0, 40]"));

  report.checks.push_back(at_most("mills_F_at_zero", "|F(0) - 1/sqrt(2 pi)|",
                                  std::fabs(mills_F(0.0) - kInvSqrt2Pi), 1e-15, "y = 0"));
  report.checks.push_back(at_most("mills_F_slope_at_zero", "|(F(1e-5) - F(0)) / 1e-5 + 1/2|",
                                  std::fabs((mills_F(1e-5) - mills_F(0.0)) / 1e-5 + 0.5), 1e-4, "y in {0, 1e-5}"));
  report.checks.push_back(at_most("mills_F_tail", "F(40)", mills_F(40.0), 1e-300, "y = 40"));

  // phi(x) / (sqrt(ln(1/Psi(x))) Psi(x)) tends to sqrt(2); it must stay bounded on [2, 8].
  const auto xs = uniform_grid(2.0, 8.0, 601);
  const double ratio_max = max_over(xs, [](double x) {
    const double tail = sf(x);
    return pdf(x) / (std::sqrt(std::log(1.0 / tail)) * tail);
  });
  report.checks.push_back(at_most("feller_ratio_bounded", "max phi / (sqrt(ln(1/Psi)) Psi)", ratio_max, 2.0,
                                  "601 points on [2, 8]"));
  return report;
}

std::vector<std::string> expected_check_names(RegimeKind regime) {
  const std::vector<std::string> common = {
      "first_order_condition", "fraudster_ode", "account_ode", "v_prime_matches_fd", "u_prime_matches_fd",
      "v_decreasing", "u_concave", "u_le_M", "lambda_positive", "smooth_fit", "u_at_zero", "v_unbounded_at_zero",
      "u_at_b"};
  std::vector<std::string> names;
  if (regime == RegimeKind::Pure) {
    names = common;
    for (const char* n : {"hjb_scan", "v_at_b", "stopping_region_slack", "stopping_region_slack_closed_form",
                          "b_le_pi_over_4", "lambda_continuity"}) {
      names.emplace_back(n);
    }
  } else {
    names = {"root_residual", "v_b_in_range", "b_below_one", "a_in_range", "b_below_one_grid", "v_continuity",
             "v_prime_continuity"};
    names.insert(names.end(), common.begin(), common.end());
    for (const char* n : {"nonlinear_ode", "indifference", "beta_positive", "beta_nondecreasing",
                          "u_equals_M_above_b", "hjb_scan"}) {
      names.emplace_back(n);
    }
  }
  return names;
}

std::string to_json(const VerifyReport& report, int indent) {
  nlohmann::ordered_json j;
  j["regime"] = std::string(to_string(report.regime));
  j["passed"] = report.passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["measure"] = c.measure;
    if (std::isfinite(c.statistic)) {
      e["statistic"] = c.statistic;
    } else {
      e["statistic"] = nullptr;
    }
    e["tolerance"] = c.tolerance;
    e["grid"] = c.grid;
    e["passed"] = c.passed;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j.dump(indent);
}

void write_table(std::ostream& os, const VerifyReport& report) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "regime: " << to_string(report.regime) << '\n';
  os << std::left << std::setw(36) << "check" << std::setw(8) << "result" << std::setw(16) << "statistic"
     << "tolerance\n";
  for (const auto& c : report.checks) {
    os << std::left << std::setw(36) << c.name << std::setw(8) << (c.passed ? "pass" : "FAIL") << std::setw(16)
       << std::setprecision(6) << std::scientific << c.statistic << c.tolerance << '\n';
    os.flags(flags);
  }
  os << (report.passed() ? "all checks passed" : "some checks FAILED") << '\n';
  os.precision(prec);
}

}  // namespace fraudgame

#include "biscv/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "biscv/errors.hpp"
#include "biscv/numerics.hpp"

namespace biscv::shape {

using catalog::DistributionSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointEval {
  double f;
  double fp;
  double F;
  double S;
};

PointEval evaluate(const DistributionSpec& d, double x) {
  return PointEval{catalog::pdf(d, x), catalog::pdf_deriv(d, x), catalog::cdf(d, x),
                   catalog::sf(d, x)};
}

void require_interior(const PointEval& e, double x) {
  if (!(e.f > 0.0) || !(e.F > 0.0) || !(e.S > 0.0)) {
    throw DomainError("point " + std::to_string(x) + " is not inside J(F) with f > 0");
  }
}

// f' / f^2 in a form that survives tiny f.
double ratio(const PointEval& e) { return (e.fp / e.f) / e.f; }

std::string spec_string(const DistributionSpec& d) { return d.to_string(); }

}  // namespace

bool ConcavityIndex::is_infinite() const noexcept { return std::isinf(s_); }

ConcavityIndex to_index(double s) {
  if (std::isnan(s) || s <= -1.0) {
    throw DomainError("s must lie in (-1, inf]; s <= -1 is outside the range of the theory");
  }
  if (std::isinf(s)) {
    return ConcavityIndex(kInf, 1.0, 0.0);
  }
  const double one_plus = 1.0 + s;
  return ConcavityIndex(s, s / one_plus, 1.0 / one_plus);
}

ConcavityIndex from_star(double s_star) {
  if (std::isnan(s_star) || s_star > 1.0 || std::isinf(s_star)) {
    throw DomainError("s* must lie in (-inf, 1]");
  }
  if (s_star == 1.0) {
    return ConcavityIndex(kInf, 1.0, 0.0);
  }
  const double one_minus = 1.0 - s_star;
  return ConcavityIndex(s_star / one_minus, s_star, one_minus);
}

Grid make_grid(const DistributionSpec& d, std::size_t n, double eps) {
  if (n < 3) {
    throw DomainError("grid needs at least 3 points");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw DomainError("grid truncation eps must lie in (0, 0.5)");
  }
  Grid grid;
  grid.eps = eps;
  grid.points.reserve(n);
  const double step = (1.0 - 2.0 * eps) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Upper half by tail mass so that symmetric laws give mirrored grids.
    const std::size_t mirror = n - 1 - i;
    const double x = i <= mirror
                         ? catalog::quantile(d, eps + step * static_cast<double>(i))
                         : catalog::quantile_upper(d, eps + step * static_cast<double>(mirror));
    if (!grid.points.empty() && !(x > grid.points.back())) {
      throw DomainError("grid points are not strictly increasing; reduce the point count");
    }
    grid.points.push_back(x);
  }
  return grid;
}

std::string to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

std::string to_string(Condition c) {
  switch (c) {
    case Condition::deriv_ineq_iv:
      return "deriv_ineq_iv";
    case Condition::hazard_mono_iii:
      return "hazard_mono_iii";
    case Condition::midpoint_def:
      return "midpoint_def";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Csorgo-Revesz functions

double cr(const DistributionSpec& d, double x) {
  const PointEval e = evaluate(d, x);
  require_interior(e, x);
  return e.F * e.S * ratio(e);
}

double cr_min(const DistributionSpec& d, double x) {
  const PointEval e = evaluate(d, x);
  require_interior(e, x);
  return std::min(e.F, e.S) * ratio(e);
}

double cr_right(const DistributionSpec& d, double x) {
  const PointEval e = evaluate(d, x);
  require_interior(e, x);
  return e.S * ratio(e);
}

double cr_left(const DistributionSpec& d, double x) {
  const PointEval e = evaluate(d, x);
  require_interior(e, x);
  return e.F * ratio(e);
}

CRReport cr_report(const DistributionSpec& d, double s, const Grid& grid) {
  const ConcavityIndex index = to_index(s);
  const auto& pts = grid.points;
  if (pts.empty()) {
    throw DomainError("cr_report: empty grid");
  }

  // Far end of the refinement bracket when the grid maximum sits on an end
  // point: the deepest tail where |fn| still evaluates to a finite number.
  auto tail_end = [&](auto&& fn, bool upper) -> std::optional<double> {
    for (const double mass : {1e-300, 1e-200, 1e-100, 1e-50, 1e-20}) {
      if (!(mass < grid.eps)) break;
      try {
        const double x = upper ? catalog::quantile_upper(d, mass) : catalog::quantile(d, mass);
        if (!std::isfinite(x)) continue;
        if (upper ? !(x > pts.back()) : !(x < pts.front())) continue;
        if (std::isfinite(fn(d, x))) return x;
      } catch (const std::exception&) {
        // Unresolvable this deep; try a shallower tail.
      }
    }
    return std::nullopt;
  };

  auto refine = [&](auto&& fn, double& best, double& where) {
    std::size_t best_i = 0;
    best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double v = std::abs(fn(d, pts[i]));
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    where = pts[best_i];
    if (pts.size() < 2) return;
    double lo = pts[best_i == 0 ? 0 : best_i - 1];
    double hi = pts[std::min(best_i + 1, pts.size() - 1)];
    if (best_i == 0) {
      if (const auto far = tail_end(fn, false)) lo = *far;
    } else if (best_i + 1 == pts.size()) {
      if (const auto far = tail_end(fn, true)) hi = *far;
    }
    const double tol = 1e-9 * (hi - lo);
    const auto res = numerics::maximize_scalar(
        [&](double x) { return std::abs(fn(d, x)); }, lo, hi, 9, tol);
    if (res.value > best) {
      best = res.value;
      where = res.location;
    }
  };

  CRReport report;
  refine(cr, report.gamma, report.argmax_gamma);
  refine(cr_min, report.gamma_tilde, report.argmax_gamma_tilde);
  report.theoretical_cap = index.one_minus_star();
  report.s = index.s();
  report.dist = spec_string(d);
  report.grid_points = grid.count();
  report.eps = grid.eps;
  return report;
}

// ---------------------------------------------------------------------------
// Checkers

CorridorSlack corridor_slack(const ConcavityIndex& index, double f, double f_prime, double F,
                             double S) {
  const double k = index.one_minus_star();
  const double m = std::min(F, S);
  const double g = (f_prime / f) / f;
  if (k > 0.0) {
    return CorridorSlack{m * (1.0 / F - g / k), m * (g / k + 1.0 / S)};
  }
  // s = inf: the corridor collapses to f' = 0; slack is |f'| m / f^2.
  return CorridorSlack{-m * g, m * g};
}

namespace {

Certificate make_certificate(Condition condition, const DistributionSpec& d,
                             const ConcavityIndex& index, const Grid& grid, double tol) {
  Certificate cert;
  cert.condition = condition;
  cert.grid = grid;
  cert.tolerance = tol;
  cert.s = index.s();
  cert.s_star = index.s_star();
  cert.dist = spec_string(d);
  cert.margin = kInf;
  return cert;
}

void finish(Certificate& cert) {
  if (cert.margin < -cert.tolerance) {
    cert.verdict = Verdict::fail;
  } else {
    cert.verdict = Verdict::pass;
    cert.witness.reset();
  }
}

void require_tol(double tol) {
  if (!(tol >= 0.0)) throw DomainError("checker tolerance must be non-negative");
}

}  // namespace

Certificate check_condition_iv(const DistributionSpec& d, double s, const Grid& grid, double tol) {
  require_tol(tol);
  const ConcavityIndex index = to_index(s);
  Certificate cert = make_certificate(Condition::deriv_ineq_iv, d, index, grid, tol);
  for (const double x : grid.points) {
    const PointEval e = evaluate(d, x);
    require_interior(e, x);
    const CorridorSlack slack = corridor_slack(index, e.f, e.fp, e.F, e.S);
    const double worst = std::min(slack.upper, slack.lower);
    if (worst < cert.margin) {
      cert.margin = worst;
      cert.witness = Witness{x, std::nullopt};
    }
    ++cert.tested;
  }
  finish(cert);
  return cert;
}

Certificate check_condition_iii(const DistributionSpec& d, double s, const Grid& grid, double tol) {
  require_tol(tol);
  const ConcavityIndex index = to_index(s);
  const double k = index.one_minus_star();
  Certificate cert = make_certificate(Condition::hazard_mono_iii, d, index, grid, tol);
  const auto& pts = grid.points;

  // log of the s*-hazard f / (1 - F)^k and of the reverse s*-hazard f / F^k.
  std::vector<double> log_hazard(pts.size());
  std::vector<double> log_reverse(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const PointEval e = evaluate(d, pts[i]);
    require_interior(e, pts[i]);
    const double lf = std::log(e.f);
    log_hazard[i] = lf - k * std::log(e.S);
    log_reverse[i] = lf - k * std::log(e.F);
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double rise = std::expm1(log_hazard[i + 1] - log_hazard[i]);
    const double fall = -std::expm1(log_reverse[i + 1] - log_reverse[i]);
    const double worst = std::min(rise, fall);
    if (worst < cert.margin) {
      cert.margin = worst;
      cert.witness = Witness{pts[i], pts[i + 1]};
    }
    ++cert.tested;
  }
  if (cert.tested == 0) cert.margin = 0.0;
  finish(cert);
  return cert;
}

double generalized_mean(double a, double b, double theta, double t) {
  if (!(a >= 0.0) || !(b >= 0.0) || std::isinf(a) || std::isinf(b)) {
    throw DomainError("generalized_mean: a and b must be finite and non-negative");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("generalized_mean: theta must lie in (0, 1)");
  }
  if (std::isnan(t)) {
    throw DomainError("generalized_mean: order must not be NaN");
  }
  if (t == kInf) return std::max(a, b);
  if (t == -kInf) return std::min(a, b);
  if (a == 0.0 || b == 0.0) {
    if (t <= 0.0) return 0.0;
    return std::pow((1.0 - theta) * std::pow(a, t) + theta * std::pow(b, t), 1.0 / t);
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  const double lg = (1.0 - theta) * la + theta * lb;
  if (t == 0.0) {
    return std::exp(lg);
  }
  const double da = la - lg;
  const double db = lb - lg;
  if (std::abs(t) * std::max(std::abs(da), std::abs(db)) < 1.0) {
    // Relative to the geometric mean, so small |t| does not cancel.
    const double w = (1.0 - theta) * std::expm1(t * da) + theta * std::expm1(t * db);
    return std::exp(lg + std::log1p(w) / t);
  }
  // log-sum-exp keeps a^t finite for large |t| and tiny a.
  const double u = std::log1p(-theta) + t * la;
  const double v = std::log(theta) + t * lb;
  const double hi = std::max(u, v);
  const double lse = hi + std::log1p(std::exp(std::min(u, v) - hi));
  return std::exp(lse / t);
}

Certificate check_midpoint(const DistributionSpec& d, double s, const Grid& grid, double tol) {
  require_tol(tol);
  const ConcavityIndex index = to_index(s);
  const double t = index.s_star();
  Certificate cert = make_certificate(Condition::midpoint_def, d, index, grid, tol);
  const auto& pts = grid.points;
  const std::size_t n = pts.size();
  if (n < 3) {
    throw DomainError("check_midpoint needs a grid of at least 3 points");
  }
  std::vector<double> F(n);
  std::vector<double> S(n);
  for (std::size_t i = 0; i < n; ++i) {
    F[i] = catalog::cdf(d, pts[i]);
    S[i] = catalog::sf(d, pts[i]);
  }

  auto test_pair = [&](std::size_t i, std::size_t j) {
    const double mid = 0.5 * (pts[i] + pts[j]);
    const double F_mid = catalog::cdf(d, mid);
    const double S_mid = catalog::sf(d, mid);
    const double mean_F = generalized_mean(F[i], F[j], 0.5, t);
    const double mean_S = generalized_mean(S[i], S[j], 0.5, t);
    const double slack_F = (F_mid - mean_F) / mean_F;
    const double slack_S = (S_mid - mean_S) / mean_S;
    const double worst = std::min(slack_F, slack_S);
    if (worst < cert.margin) {
      cert.margin = worst;
      cert.witness = Witness{pts[i], pts[j]};
    }
    ++cert.tested;
  };

  if (n <= 200) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) test_pair(i, j);
    }
  } else {
    for (std::size_t lag = 1; lag < n; lag *= 2) {
      for (std::size_t i = 0; i + lag < n; ++i) test_pair(i, i + lag);
    }
  }
  finish(cert);
  return cert;
}

// ---------------------------------------------------------------------------
// Searches

MaxSResult max_s(const DistributionSpec& d, double lo, double hi, double tol,
                 std::size_t grid_points, double eps, double check_tol) {
  if (!(lo < hi)) {
    throw DomainError("max_s: requires lo < hi");
  }
  const Grid grid = make_grid(d, grid_points, eps);
  auto passes = [&](double s) { return check_condition_iv(d, s, grid, check_tol).passed(); };

  MaxSResult result;
  result.grid_points = grid.count();
  result.eps = grid.eps;
  if (!passes(lo)) {
    throw BracketError("bracket invalid: condition (iv) already fails at s = " +
                       std::to_string(lo) + "; try a lower bracket end closer to -1");
  }
  if (passes(hi)) {
    result.s = hi;
    result.reached_upper = true;
    return result;
  }
  result.s = numerics::bisect_bracket(passes, lo, hi, tol).last_true;
  return result;
}

DistributionSpec make_mixture(MixtureFamily family, double r, double delta) {
  if (family == MixtureFamily::normal) {
    return DistributionSpec(catalog::NormalMixture{delta});
  }
  return DistributionSpec(catalog::TMixture{r, delta});
}

double delta_threshold(MixtureFamily family, double r, double s, double lo, double hi, double tol,
                       std::size_t grid_points, double eps, double check_tol) {
  (void)to_index(s);
  auto passes = [&](double delta) {
    const DistributionSpec d = make_mixture(family, r, delta);
    return check_condition_iv(d, s, make_grid(d, grid_points, eps), check_tol).passed();
  };
  return numerics::bisect_boundary(passes, lo, hi, tol);
}

}  // namespace biscv::shape

#include "biscv/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "biscv/errors.hpp"
#include "biscv/numerics.hpp"

namespace biscv::fisher {

using catalog::DistributionSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGrowth = 1.10;
constexpr int kGrowthRun = 3;
// Probability cut-offs 10^-6, 10^-8, ..., 10^-14 at each end.
constexpr int kFirstExponent = 6;
constexpr int kLastExponent = 14;

double effective(const IntegralValue& v) { return v.divergent ? kInf : v.value; }

double integrate_piece(const numerics::RealFunction& g, double lo, double hi, double rel_tol,
                       double& abs_err) {
  if (!(hi > lo)) return 0.0;
  const auto part = numerics::integrate_adaptive(g, lo, hi, rel_tol);
  abs_err += part.abs_error_estimate;
  return part.value;
}

// Integrates piecewise between quantiles 10^-k and 1 - 10^-k so that no
// piece hides a narrow spike from the Kronrod nodes. Estimates over
// [q(eps), q(1 - eps)] for eps = 10^-6, ..., 10^-14 decide divergence: three
// successive refinements each growing by more than 10%, or any estimate above
// the ceiling. Otherwise the two outermost tails are added.
IntegralValue integrate_over_support(const DistributionSpec& d, const numerics::RealFunction& g,
                                     double rel_tol) {
  const auto q = [&d](double p) { return catalog::quantile(d, p); };
  double abs_err = 0.0;

  std::vector<double> cuts{q(0.5)};
  for (int e = 1; e <= kFirstExponent; ++e) {
    const double p = std::pow(10.0, -e);
    cuts.insert(cuts.begin(), q(p));
    cuts.push_back(q(1.0 - p));
  }
  double estimate = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    estimate += integrate_piece(g, cuts[i], cuts[i + 1], rel_tol, abs_err);
  }

  double left = cuts.front();
  double right = cuts.back();
  int growth_run = 0;
  for (int e = kFirstExponent; e <= kLastExponent; e += 2) {
    if (e > kFirstExponent) {
      const double p = std::pow(10.0, -e);
      const double new_left = q(p);
      const double new_right = q(1.0 - p);
      const double mid = std::pow(10.0, -(e - 1));
      const double previous = estimate;
      estimate += integrate_piece(g, new_left, q(mid), rel_tol, abs_err);
      estimate += integrate_piece(g, q(mid), left, rel_tol, abs_err);
      estimate += integrate_piece(g, right, q(1.0 - mid), rel_tol, abs_err);
      estimate += integrate_piece(g, q(1.0 - mid), new_right, rel_tol, abs_err);
      left = new_left;
      right = new_right;
      if (estimate > kGrowth * previous) {
        if (++growth_run >= kGrowthRun) return IntegralValue{estimate, true, abs_err};
      } else {
        growth_run = 0;
      }
    }
    if (estimate > kDivergenceCeiling) return IntegralValue{estimate, true, abs_err};
  }

  const auto supp = catalog::support(d);
  estimate += integrate_piece(g, supp.lo, left, rel_tol, abs_err);
  estimate += integrate_piece(g, right, supp.hi, rel_tol, abs_err);
  if (estimate > kDivergenceCeiling) return IntegralValue{estimate, true, abs_err};
  return IntegralValue{estimate, false, abs_err};
}

}  // namespace

IntegralValue fisher_info(const DistributionSpec& d, double rel_tol) {
  const auto supp = catalog::support(d);
  const auto integrand = [&d, supp](double x) {
    // The open support only; Pareto and Uniform have jumps at the ends.
    if (!(x > supp.lo && x < supp.hi)) return 0.0;
    const double f = catalog::pdf(d, x);
    if (!(f > 0.0)) return 0.0;
    const double fp = catalog::pdf_deriv(d, x);
    return fp * (fp / f);
  };
  return integrate_over_support(d, integrand, rel_tol);
}

HardyPair hardy_integrals(const DistributionSpec& d, double rel_tol) {
  const auto left = [&d](double x) {
    const double f = catalog::pdf(d, x);
    const double F = catalog::cdf(d, x);
    if (!(f > 0.0) || !(F > 0.0)) return 0.0;
    const double ratio = f / F;
    return ratio * ratio * f;
  };
  const auto right = [&d](double x) {
    const double f = catalog::pdf(d, x);
    const double S = catalog::sf(d, x);
    if (!(f > 0.0) || !(S > 0.0)) return 0.0;
    const double ratio = f / S;
    return ratio * ratio * f;
  };
  HardyPair out;
  out.left = integrate_over_support(d, left, rel_tol);
  out.right = integrate_over_support(d, right, rel_tol);
  return out;
}

double fisher_closed_form_spherical(double r) {
  if (!(r > 2.0)) {
    throw DomainError("fisher_closed_form_spherical: r must be > 2 (I_f diverges otherwise)");
  }
  using numerics::log_gamma;
  return 0.5 * r *
         std::exp(log_gamma(0.5 * r - 1.0) + log_gamma(0.5 * (r + 3.0)) -
                  2.0 * log_gamma(0.5 * r + 1.0));
}

FisherReport check_fisher_chain(const DistributionSpec& d, double s, const shape::Grid& grid,
                                double rel_tol) {
  const auto index = shape::to_index(s);
  const auto cert = shape::check_condition_iv(d, s, grid);
  if (!cert.passed()) {
    const double wx = cert.witness ? cert.witness->x : std::nan("");
    throw PreconditionError("check_fisher_chain: " + d.to_string() + " is not bi-" +
                            std::to_string(s) + "-concave; f' leaves the corridor at x = " +
                            std::to_string(wx));
  }

  FisherReport rep;
  rep.s = s;
  rep.dist = d.to_string();
  rep.rel_tol = rel_tol;
  rep.info = fisher_info(d, rel_tol);
  rep.hardy = hardy_integrals(d, rel_tol);

  const double info = effective(rep.info);
  const double hardy_max = std::max(effective(rep.hardy.left), effective(rep.hardy.right));
  const double factor = index.one_minus_star() * index.one_minus_star();  // 1 / (1 + s)^2
  rep.chain_lo = hardy_max / 4.0;
  rep.chain_hi = factor == 0.0 ? 0.0 : 2.0 * factor * hardy_max;
  rep.all_infinite = rep.info.divergent && rep.hardy.left.divergent && rep.hardy.right.divergent;

  const double slack = 1.0 + 1e3 * rel_tol;
  const auto leq = [slack](double a, double b) {
    if (std::isinf(b)) return true;
    if (std::isinf(a)) return false;
    return a <= b * slack + numerics::kAbsoluteFloor;
  };
  const double lower_rhs = factor == 0.0 ? 0.0 : 8.0 * factor * info;
  rep.hardy_holds = leq(effective(rep.hardy.left), 4.0 * info) &&
                    leq(effective(rep.hardy.right), 4.0 * info);
  rep.upper_holds = leq(info, rep.chain_hi);
  rep.lower_holds = leq(rep.chain_hi, lower_rhs);
  return rep;
}

}  // namespace biscv::fisher

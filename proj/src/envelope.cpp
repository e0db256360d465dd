#include "biscv/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "biscv/errors.hpp"

namespace biscv::envelope {

using catalog::DistributionSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Local {
  double F;
  double S;
  double f;
};

Local local_values(const DistributionSpec& d, double x) {
  const double F = catalog::cdf(d, x);
  const double S = catalog::sf(d, x);
  if (!(F > 0.0) || !(S > 0.0)) {
    throw DomainError("envelope: x = " + std::to_string(x) + " lies outside J(F)");
  }
  return Local{F, S, catalog::pdf(d, x)};
}

// log(1 - F) and log F, each taken from the smaller of F and 1 - F.
double log_sf(double F, double S) { return F < 0.5 ? std::log1p(-F) : std::log(S); }
double log_cdf(double F, double S) { return S < 0.5 ? std::log1p(-S) : std::log(F); }

double upper_transform(double s_star, double F, double S) {
  if (s_star == 0.0) return -log_sf(F, S);
  return -std::expm1(s_star * log_sf(F, S)) / s_star;
}

double lower_transform(double s_star, double F, double S) {
  if (s_star == 0.0) return 1.0 + log_cdf(F, S);
  const double lf = log_cdf(F, S);
  // Near s* = 1 the constant 1 - s* vanishes and the direct form keeps F_L ~ F.
  if (s_star >= 0.5) return (std::exp(s_star * lf) - (1.0 - s_star)) / s_star;
  return 1.0 + std::expm1(s_star * lf) / s_star;
}

// value^(1/s_star) for the positive part of `base`; vacuous (inf or 0) when
// the base is not positive.
double positive_power(double base, double s_star) {
  if (base <= 0.0) {
    return s_star < 0.0 ? kInf : 0.0;
  }
  return std::pow(base, 1.0 / s_star);
}

}  // namespace

double f_upper(const DistributionSpec& d, double s, double x) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  return upper_transform(index.s_star(), v.F, v.S);
}

double f_lower(const DistributionSpec& d, double s, double x) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  return lower_transform(index.s_star(), v.F, v.S);
}

double fu_prime(const DistributionSpec& d, double s, double x) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  return v.f * std::exp(-index.one_minus_star() * log_sf(v.F, v.S));
}

double fl_prime(const DistributionSpec& d, double s, double x) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  return v.f * std::exp(-index.one_minus_star() * log_cdf(v.F, v.S));
}

Corridor fprime_corridor(const DistributionSpec& d, double s, double x) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  if (!(v.f > 0.0)) {
    throw DomainError("fprime_corridor: f(x) = 0 at x = " + std::to_string(x));
  }
  const double k = index.one_minus_star();
  const double f2 = v.f * v.f;
  return Corridor{-k * f2 / v.S, k * f2 / v.F};
}

bool in_corridor(const DistributionSpec& d, double s, double x, double tol) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  if (!(v.f > 0.0)) {
    throw DomainError("in_corridor: f(x) = 0 at x = " + std::to_string(x));
  }
  const auto slack = shape::corridor_slack(index, v.f, catalog::pdf_deriv(d, x), v.F, v.S);
  return slack.upper >= -tol && slack.lower >= -tol;
}

Band pointwise_band(const DistributionSpec& d, double s, double x, double t) {
  const auto index = shape::to_index(s);
  const Local v = local_values(d, x);
  const double s_star = index.s_star();
  if (t == 0.0) {
    return Band{v.F, v.F};
  }

  Band band;
  if (s_star == 0.0) {
    band.upper = v.F * std::exp(v.f / v.F * t);
    band.lower = 1.0 - v.S * std::exp(-v.f / v.S * t);
    return band;
  }
  band.upper = v.F * positive_power(1.0 + s_star * (v.f / v.F) * t, s_star);
  band.lower = 1.0 - v.S * positive_power(1.0 - s_star * (v.f / v.S) * t, s_star);

  if (s_star > 0.0) {
    const auto supp = catalog::support(d);
    if (!(t > supp.lo - x)) {
      band.upper = 1.0;
      band.upper_defined = false;
    }
    if (!(t < supp.hi - x)) {
      band.lower = 0.0;
      band.lower_defined = false;
    }
  }
  return band;
}

std::vector<EnvelopeRow> emit_envelope_table(const DistributionSpec& d, double s,
                                             const shape::Grid& grid) {
  const auto index = shape::to_index(s);
  const double s_star = index.s_star();
  const double k = index.one_minus_star();
  std::vector<EnvelopeRow> rows;
  rows.reserve(grid.count());
  for (const double x : grid.points) {
    const Local v = local_values(d, x);
    EnvelopeRow row{};
    row.x = x;
    row.F = v.F;
    row.f = v.f;
    row.F_U = upper_transform(s_star, v.F, v.S);
    row.F_L = lower_transform(s_star, v.F, v.S);
    row.FU_prime = v.f * std::exp(-k * log_sf(v.F, v.S));
    row.FL_prime = v.f * std::exp(-k * log_cdf(v.F, v.S));
    row.f_prime = catalog::pdf_deriv(d, x);
    const double f2 = v.f * v.f;
    row.fp_lo = -k * f2 / v.S;
    row.fp_hi = k * f2 / v.F;
    row.F_U_clamped = std::min(row.F_U, 1.0);
    if (!rows.empty() && !(x > rows.back().x)) {
      throw DomainError("emit_envelope_table: grid is not strictly increasing");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<EnvelopeRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[32];
  auto put = [&](double v, bool last) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << (last ? '\n' : ',');
  };
  for (const auto& r : rows) {
    put(r.x, false);
    put(r.F, false);
    put(r.F_L, false);
    put(r.F_U, false);
    put(r.f, false);
    put(r.FL_prime, false);
    put(r.FU_prime, false);
    put(r.f_prime, false);
    put(r.fp_lo, false);
    put(r.fp_hi, true);
  }
}

}  // namespace biscv::envelope

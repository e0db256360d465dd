#include "biscv/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "biscv/errors.hpp"
#include "biscv/numerics.hpp"

namespace biscv::catalog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || std::isinf(v)) {
    throw DomainError(std::string(name) + " must be > 0");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Student t with r degrees of freedom, standard location and scale.

double t_log_constant(double r) {
  return numerics::log_gamma(0.5 * (r + 1.0)) - numerics::log_gamma(0.5 * r) -
         0.5 * std::log(std::numbers::pi * r);
}

// log(1 + x^2 / r) without overflow for huge |x|.
double t_log_kernel(double r, double x) {
  const double z = std::abs(x) / std::sqrt(r);
  if (z > 1e150) {
    return 2.0 * std::log(z);
  }
  return std::log1p(z * z);
}

double t_pdf(double r, double x) {
  return std::exp(t_log_constant(r) - 0.5 * (r + 1.0) * t_log_kernel(r, x));
}

// f'/f = -(r + 1) x / (r + x^2).
double t_score(double r, double x) {
  if (x == 0.0) return 0.0;
  return -(r + 1.0) / (x + r / x);
}

double t_pdf_deriv(double r, double x) { return t_pdf(r, x) * t_score(r, x); }

// P(T > |x|) with full relative accuracy.
double t_tail(double r, double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.5;
  if (std::isinf(ax)) return 0.0;
  // w = r / (r + x^2), 1 - w = x^2 / (r + x^2), both formed without cancellation.
  double w;
  double one_minus_w;
  if (ax > 1e150) {
    w = r / ax / ax;
    one_minus_w = 1.0;
  } else {
    const double denom = r + ax * ax;
    w = r / denom;
    one_minus_w = ax * ax / denom;
  }
  const auto [lower, upper] = numerics::reg_incomplete_beta_pair(0.5 * r, 0.5, w, one_minus_w);
  (void)upper;
  return 0.5 * lower;
}

double t_cdf(double r, double x) { return x <= 0.0 ? t_tail(r, x) : 1.0 - t_tail(r, x); }
double t_sf(double r, double x) { return x >= 0.0 ? t_tail(r, x) : 1.0 - t_tail(r, x); }

// ---------------------------------------------------------------------------
// F distribution in the (a, b) parameterization of the family.

double f_log_constant(double a, double b) {
  return 0.5 * a * std::log(a) + 0.5 * b * std::log(b) - numerics::log_beta(0.5 * a, 0.5 * b);
}

double f_pdf(double a, double b, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 0.0;
  return std::exp(f_log_constant(a, b) + (0.5 * b - 1.0) * std::log(x) -
                  0.5 * (a + b) * std::log(a + b * x));
}

double f_pdf_deriv(double a, double b, double x) {
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double score = (0.5 * b - 1.0) / x - 0.5 * (a + b) * b / (a + b * x);
  return f_pdf(a, b, x) * score;
}

std::pair<double, double> f_cdf_sf(double a, double b, double x) {
  if (!(x > 0.0)) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  const double denom = a + b * x;
  return numerics::reg_incomplete_beta_pair(0.5 * b, 0.5 * a, b * x / denom, a / denom);
}

// ---------------------------------------------------------------------------
// Example-4 spherical power family on [-sqrt(r), sqrt(r)].

double g_log_constant(double r) {
  return numerics::log_gamma(0.5 * (3.0 + r)) - 0.5 * std::log(std::numbers::pi * r) -
         numerics::log_gamma(1.0 + 0.5 * r);
}

// 1 - x^2 / r as a product so it keeps relative accuracy near the endpoints.
double g_kernel(double r, double x) {
  const double z = x / std::sqrt(r);
  return (1.0 - z) * (1.0 + z);
}

double g_pdf(double r, double x) {
  const double root = std::sqrt(r);
  if (x < -root || x > root) return 0.0;
  const double q = g_kernel(r, x);
  if (q <= 0.0) return 0.0;
  return std::exp(g_log_constant(r)) * std::pow(q, 0.5 * r);
}

double g_pdf_deriv(double r, double x) {
  const double root = std::sqrt(r);
  if (x < -root || x > root) return 0.0;
  const double q = std::max(g_kernel(r, x), 0.0);
  return -std::exp(g_log_constant(r)) * x * std::pow(q, 0.5 * r - 1.0);
}

std::pair<double, double> g_cdf_sf(double r, double x) {
  const double root = std::sqrt(r);
  if (x <= -root) return {0.0, 1.0};
  if (x >= root) return {1.0, 0.0};
  const double z = x / root;
  const double u = 0.5 * (1.0 + z);
  const double v = 0.5 * (1.0 - z);
  const double k = 0.5 * r + 1.0;
  return numerics::reg_incomplete_beta_pair(k, k, u, v);
}

// ---------------------------------------------------------------------------
// Normal(mu, sigma).

double n_pdf(double mu, double sigma, double x) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double n_pdf_deriv(double mu, double sigma, double x) {
  const double z = (x - mu) / sigma;
  return -z / sigma * n_pdf(mu, sigma, x);
}

double n_cdf(double mu, double sigma, double x) {
  return 0.5 * numerics::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double n_sf(double mu, double sigma, double x) {
  return 0.5 * numerics::erfc((x - mu) / (sigma * std::numbers::sqrt2));
}

}  // namespace

// ---------------------------------------------------------------------------

DistributionSpec::DistributionSpec(Family family) : family_(family) {
  std::visit(Overloaded{
                 [](const StudentT& f) { require_positive(f.r, "r"); },
                 [](const FDist& f) {
                   require_positive(f.a, "a");
                   require_positive(f.b, "b");
                 },
                 [](const Pareto& f) {
                   require_positive(f.a, "a");
                   require_positive(f.b, "b");
                 },
                 [](const SphericalPower& f) { require_positive(f.r, "r"); },
                 [](const Normal& f) {
                   require_finite(f.mu, "mu");
                   require_positive(f.sigma, "sigma");
                 },
                 [](const Uniform& f) {
                   require_finite(f.lo, "lo");
                   require_finite(f.hi, "hi");
                   if (!(f.lo < f.hi)) throw DomainError("lo must be < hi");
                 },
                 [](const NormalMixture& f) { require_positive(f.delta, "delta"); },
                 [](const TMixture& f) {
                   require_positive(f.r, "r");
                   require_positive(f.delta, "delta");
                 },
             },
             family_);
}

std::string DistributionSpec::tag() const {
  return std::visit(Overloaded{
                        [](const StudentT&) { return std::string("t"); },
                        [](const FDist&) { return std::string("fdist"); },
                        [](const Pareto&) { return std::string("pareto"); },
                        [](const SphericalPower&) { return std::string("gpow"); },
                        [](const Normal&) { return std::string("normal"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const NormalMixture&) { return std::string("normmix"); },
                        [](const TMixture&) { return std::string("tmix"); },
                    },
                    family_);
}

std::vector<std::pair<std::string, double>> DistributionSpec::parameters() const {
  using Pairs = std::vector<std::pair<std::string, double>>;
  return std::visit(
      Overloaded{
          [](const StudentT& f) { return Pairs{{"r", f.r}}; },
          [](const FDist& f) { return Pairs{{"a", f.a}, {"b", f.b}}; },
          [](const Pareto& f) { return Pairs{{"a", f.a}, {"b", f.b}}; },
          [](const SphericalPower& f) { return Pairs{{"r", f.r}}; },
          [](const Normal& f) { return Pairs{{"mu", f.mu}, {"sigma", f.sigma}}; },
          [](const Uniform& f) { return Pairs{{"lo", f.lo}, {"hi", f.hi}}; },
          [](const NormalMixture& f) { return Pairs{{"delta", f.delta}}; },
          [](const TMixture& f) { return Pairs{{"r", f.r}, {"delta", f.delta}}; },
      },
      family_);
}

std::string DistributionSpec::to_string() const {
  const auto params = parameters();
  std::string out = tag() + ":";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ",";
    out += params[i].first;
    out += "=";
    out += format_number(params[i].second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spec-string parser:  family ":" key "=" number { "," key "=" number }

namespace {

struct FamilyGrammar {
  std::vector<std::string> keys;
  std::map<std::string, double> defaults;
};

const std::map<std::string, FamilyGrammar>& grammar() {
  static const std::map<std::string, FamilyGrammar> table = {
      {"t", {{"r"}, {}}},
      {"fdist", {{"a", "b"}, {}}},
      {"pareto", {{"a", "b"}, {}}},
      {"gpow", {{"r"}, {}}},
      {"normal", {{"mu", "sigma"}, {{"mu", 0.0}, {"sigma", 1.0}}}},
      {"uniform", {{"lo", "hi"}, {{"lo", 0.0}, {"hi", 1.0}}}},
      {"normmix", {{"delta"}, {}}},
      {"tmix", {{"r", "delta"}, {}}},
  };
  return table;
}

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

DistributionSpec parse_spec(std::string_view text) {
  std::size_t pos = 0;
  auto read_ident = [&]() {
    const std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  };

  const std::string family = read_ident();
  if (family.empty()) {
    throw ParseError("expected a family name", 0);
  }
  const auto it = grammar().find(family);
  if (it == grammar().end()) {
    throw ParseError("unknown family '" + family + "'", 0);
  }
  const FamilyGrammar& rule = it->second;
  std::map<std::string, double> values;

  if (pos == text.size() && rule.defaults.size() == rule.keys.size()) {
    // Bare family name; every parameter has a default.
  } else {
    if (pos >= text.size() || text[pos] != ':') {
      throw ParseError("expected ':' after family name", pos);
    }
    ++pos;
    while (true) {
      const std::size_t key_pos = pos;
      const std::string key = read_ident();
      if (key.empty()) {
        throw ParseError("expected a parameter name", key_pos);
      }
      if (std::find(rule.keys.begin(), rule.keys.end(), key) == rule.keys.end()) {
        throw ParseError("unknown key '" + key + "' for family '" + family + "'", key_pos);
      }
      if (values.count(key) != 0) {
        throw ParseError("duplicate key '" + key + "'", key_pos);
      }
      if (pos >= text.size() || text[pos] != '=') {
        throw ParseError("expected '=' after '" + key + "'", pos);
      }
      ++pos;
      const std::size_t num_pos = pos;
      const char* first = text.data() + pos;
      const char* last = text.data() + text.size();
      if (first < last && *first == '+') ++first;
      double value = 0.0;
      const auto res = std::from_chars(first, last, value, std::chars_format::general);
      if (res.ec != std::errc() || res.ptr == first) {
        throw ParseError("expected a number for '" + key + "'", num_pos);
      }
      pos = static_cast<std::size_t>(res.ptr - text.data());
      values[key] = value;
      if (pos == text.size()) break;
      if (text[pos] != ',') {
        throw ParseError("expected ',' or end of input", pos);
      }
      ++pos;
    }
  }

  for (const auto& key : rule.keys) {
    if (values.count(key) == 0) {
      const auto def = rule.defaults.find(key);
      if (def == rule.defaults.end()) {
        throw ParseError("missing key '" + key + "' for family '" + family + "'", text.size());
      }
      values[key] = def->second;
    }
  }

  if (family == "t") return DistributionSpec(StudentT{values["r"]});
  if (family == "fdist") return DistributionSpec(FDist{values["a"], values["b"]});
  if (family == "pareto") return DistributionSpec(Pareto{values["a"], values["b"]});
  if (family == "gpow") return DistributionSpec(SphericalPower{values["r"]});
  if (family == "normal") return DistributionSpec(Normal{values["mu"], values["sigma"]});
  if (family == "uniform") return DistributionSpec(Uniform{values["lo"], values["hi"]});
  if (family == "normmix") return DistributionSpec(NormalMixture{values["delta"]});
  return DistributionSpec(TMixture{values["r"], values["delta"]});
}

// ---------------------------------------------------------------------------
// Evaluators

double pdf(const DistributionSpec& d, double x) {
  return std::visit(
      Overloaded{
          [x](const StudentT& f) { return t_pdf(f.r, x); },
          [x](const FDist& f) { return f_pdf(f.a, f.b, x); },
          [x](const Pareto& f) {
            if (x < f.b || std::isinf(x)) return 0.0;
            return f.a / f.b * std::pow(x / f.b, -(f.a + 1.0));
          },
          [x](const SphericalPower& f) { return g_pdf(f.r, x); },
          [x](const Normal& f) { return n_pdf(f.mu, f.sigma, x); },
          [x](const Uniform& f) { return (x < f.lo || x > f.hi) ? 0.0 : 1.0 / (f.hi - f.lo); },
          [x](const NormalMixture& f) {
            return 0.5 * (n_pdf(-f.delta, 1.0, x) + n_pdf(f.delta, 1.0, x));
          },
          [x](const TMixture& f) { return 0.5 * (t_pdf(f.r, x - f.delta) + t_pdf(f.r, x + f.delta)); },
      },
      d.family());
}

double pdf_deriv(const DistributionSpec& d, double x) {
  return std::visit(
      Overloaded{
          [x](const StudentT& f) { return t_pdf_deriv(f.r, x); },
          [x](const FDist& f) { return f_pdf_deriv(f.a, f.b, x); },
          [x](const Pareto& f) {
            if (x == f.b) {
              throw NonDifferentiableError("non-differentiable point: Pareto density jumps at x = b", x);
            }
            if (x < f.b || std::isinf(x)) return 0.0;
            return -(f.a + 1.0) / x * (f.a / f.b * std::pow(x / f.b, -(f.a + 1.0)));
          },
          [x](const SphericalPower& f) { return g_pdf_deriv(f.r, x); },
          [x](const Normal& f) { return n_pdf_deriv(f.mu, f.sigma, x); },
          [x](const Uniform& f) {
            if (x == f.lo || x == f.hi) {
              throw NonDifferentiableError("non-differentiable point: uniform density jumps at an endpoint", x);
            }
            return 0.0;
          },
          [x](const NormalMixture& f) {
            return 0.5 * (n_pdf_deriv(-f.delta, 1.0, x) + n_pdf_deriv(f.delta, 1.0, x));
          },
          [x](const TMixture& f) {
            return 0.5 * (t_pdf_deriv(f.r, x - f.delta) + t_pdf_deriv(f.r, x + f.delta));
          },
      },
      d.family());
}

double cdf(const DistributionSpec& d, double x) {
  return std::visit(
      Overloaded{
          [x](const StudentT& f) { return t_cdf(f.r, x); },
          [x](const FDist& f) { return f_cdf_sf(f.a, f.b, x).first; },
          [x](const Pareto& f) { return x <= f.b ? 0.0 : -std::expm1(f.a * std::log(f.b / x)); },
          [x](const SphericalPower& f) { return g_cdf_sf(f.r, x).first; },
          [x](const Normal& f) { return n_cdf(f.mu, f.sigma, x); },
          [x](const Uniform& f) {
            if (x <= f.lo) return 0.0;
            if (x >= f.hi) return 1.0;
            return (x - f.lo) / (f.hi - f.lo);
          },
          [x](const NormalMixture& f) {
            return 0.5 * (n_cdf(-f.delta, 1.0, x) + n_cdf(f.delta, 1.0, x));
          },
          [x](const TMixture& f) { return 0.5 * (t_cdf(f.r, x - f.delta) + t_cdf(f.r, x + f.delta)); },
      },
      d.family());
}

double sf(const DistributionSpec& d, double x) {
  return std::visit(
      Overloaded{
          [x](const StudentT& f) { return t_sf(f.r, x); },
          [x](const FDist& f) { return f_cdf_sf(f.a, f.b, x).second; },
          [x](const Pareto& f) { return x <= f.b ? 1.0 : std::pow(f.b / x, f.a); },
          [x](const SphericalPower& f) { return g_cdf_sf(f.r, x).second; },
          [x](const Normal& f) { return n_sf(f.mu, f.sigma, x); },
          [x](const Uniform& f) {
            if (x <= f.lo) return 1.0;
            if (x >= f.hi) return 0.0;
            return (f.hi - x) / (f.hi - f.lo);
          },
          [x](const NormalMixture& f) {
            return 0.5 * (n_sf(-f.delta, 1.0, x) + n_sf(f.delta, 1.0, x));
          },
          [x](const TMixture& f) { return 0.5 * (t_sf(f.r, x - f.delta) + t_sf(f.r, x + f.delta)); },
      },
      d.family());
}

Support support(const DistributionSpec& d) {
  return std::visit(Overloaded{
                        [](const FDist&) { return Support{0.0, kInf}; },
                        [](const Pareto& f) { return Support{f.b, kInf}; },
                        [](const SphericalPower& f) {
                          const double root = std::sqrt(f.r);
                          return Support{-root, root};
                        },
                        [](const Uniform& f) { return Support{f.lo, f.hi}; },
                        [](const auto&) { return Support{-kInf, kInf}; },
                    },
                    d.family());
}

namespace {

// Solves cdf(x) = p, or sf(x) = q when upper_tail is set (then p is unused).
double invert(const DistributionSpec& d, double p, double q, bool upper_tail) {
  const Support s = support(d);
  // below(x) is true while x lies strictly left of the quantile.
  auto below = [&](double x) { return upper_tail ? sf(d, x) > q : cdf(d, x) < p; };

  double lo = s.lo;
  double hi = s.hi;
  double center = 0.0;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    center = 0.5 * (lo + hi);
  } else if (std::isfinite(lo)) {
    center = lo + 1.0;
  } else if (std::isfinite(hi)) {
    center = hi - 1.0;
  } else if (const auto* n = std::get_if<Normal>(&d.family())) {
    center = n->mu;
  }
  if (std::isinf(lo)) {
    double step = 1.0;
    lo = center - step;
    while (!below(lo)) {
      step *= 2.0;
      lo = center - step;
      if (std::isinf(lo)) throw DomainError("quantile: failed to bracket lower tail");
    }
  }
  if (std::isinf(hi)) {
    double step = 1.0;
    const double start = std::max(center, lo);
    hi = start + step;
    while (below(hi)) {
      step *= 2.0;
      hi = start + step;
      if (std::isinf(hi)) throw DomainError("quantile: failed to bracket upper tail");
    }
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) break;
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Pick whichever bracket end matches p more closely.
  const double err_lo = upper_tail ? std::abs(sf(d, lo) - q) : std::abs(cdf(d, lo) - p);
  const double err_hi = upper_tail ? std::abs(sf(d, hi) - q) : std::abs(cdf(d, hi) - p);
  return err_lo < err_hi ? lo : hi;
}

}  // namespace

double quantile(const DistributionSpec& d, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0, 1)");
  }
  return p > 0.5 ? invert(d, p, 1.0 - p, true) : invert(d, p, 1.0 - p, false);
}

double quantile_upper(const DistributionSpec& d, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("quantile_upper: q must lie in (0, 1)");
  }
  return q < 0.5 ? invert(d, 1.0 - q, q, true) : invert(d, 1.0 - q, q, false);
}

MaxKnownS max_known_s(const DistributionSpec& d) {
  return std::visit(Overloaded{
                        [](const StudentT& f) -> MaxKnownS { return -1.0 / (1.0 + f.r); },
                        [](const FDist& f) -> MaxKnownS {
                          if (f.a >= 2.0 && f.b >= 2.0) return -1.0 / (1.0 + 0.5 * f.a);
                          return std::nullopt;
                        },
                        [](const Pareto& f) -> MaxKnownS { return -1.0 / (1.0 + f.a); },
                        [](const SphericalPower& f) -> MaxKnownS { return 2.0 / f.r; },
                        [](const Normal&) -> MaxKnownS { return 0.0; },
                        [](const Uniform&) -> MaxKnownS { return kInf; },
                        [](const auto&) -> MaxKnownS { return std::nullopt; },
                    },
                    d.family());
}

std::optional<double> normalizing_constant(const DistributionSpec& d) {
  return std::visit(Overloaded{
                        [](const StudentT& f) -> std::optional<double> {
                          return std::exp(t_log_constant(f.r));
                        },
                        [](const FDist& f) -> std::optional<double> {
                          return std::exp(f_log_constant(f.a, f.b));
                        },
                        [](const SphericalPower& f) -> std::optional<double> {
                          return std::exp(g_log_constant(f.r));
                        },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    d.family());
}

bool is_symmetric(const DistributionSpec& d) {
  return std::holds_alternative<StudentT>(d.family()) ||
         std::holds_alternative<SphericalPower>(d.family()) ||
         std::holds_alternative<Normal>(d.family()) ||
         std::holds_alternative<Uniform>(d.family()) ||
         std::holds_alternative<NormalMixture>(d.family()) ||
         std::holds_alternative<TMixture>(d.family());
}

}  // namespace biscv::catalog

#include "biscv/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "biscv/errors.hpp"

namespace biscv::numerics {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
// Segments narrower than this many ulps of their abscissa are not split.
constexpr double kResolutionUlps = 256.0;

// Kronrod abscissas on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::size_t piece = 0;
};

struct SegmentOrder {
  bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.error < rhs.error; }
};

double checked(const RealFunction& g, double t, const RealFunction& to_x) {
  const double v = g(t);
  if (std::isnan(v)) {
    throw EvaluationError("integrand returned NaN", to_x(t));
  }
  return v;
}

// One G7-K15 panel with the QUADPACK error heuristic.
Segment gauss_kronrod_15(const RealFunction& g, double a, double b, const RealFunction& to_x) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = checked(g, center, to_x);

  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};

  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = checked(g, center - dx, to_x);
    f_right[j] = checked(g, center + dx, to_x);
    const double pair = f_left[j] + f_right[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) {
      gauss += kGaussWeights[j / 2] * pair;
    }
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  Segment seg{a, b, kronrod * half, 0.0};
  const double result_asc = asc * std::abs(half);
  const double result_abs = abs_sum * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * result_abs);
  }
  seg.error = err;
  return seg;
}

}  // namespace

QuadratureResult integrate_adaptive(const RealFunction& integrand, double lo, double hi,
                                    double rel_tol, std::size_t max_subdivisions) {
  if (!(lo < hi)) {
    throw DomainError("integrate_adaptive: requires lo < hi");
  }
  if (!(rel_tol > 0.0)) {
    throw DomainError("integrate_adaptive: rel_tol must be positive");
  }

  // An infinite half-line [c, inf) uses x = c + t/(1 - t^2), t in [0, 1),
  // written in w = 1 - t in (0, 1] so that 1 - t^2 = w (2 - w) keeps full
  // precision as t approaches 1. The whole line is two such halves.
  struct Piece {
    RealFunction g;
    RealFunction to_x;
    double a;
    double b;
  };
  std::vector<Piece> pieces;
  auto half_line = [&](double origin, double sign) {
    auto to_x = [origin, sign](double w) { return origin + sign * (1.0 - w) / (w * (2.0 - w)); };
    auto g = [&integrand, to_x](double w) {
      const double fx = integrand(to_x(w));
      if (fx == 0.0) return 0.0;
      const double q = w * (2.0 - w);
      const double t = 1.0 - w;
      return fx * (1.0 + t * t) / (q * q);
    };
    pieces.push_back(Piece{g, to_x, 0.0, 1.0});
  };
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) {
    half_line(0.0, -1.0);
    half_line(0.0, 1.0);
  } else if (lo_inf) {
    half_line(hi, -1.0);
  } else if (hi_inf) {
    half_line(lo, 1.0);
  } else {
    pieces.push_back(Piece{integrand, [](double x) { return x; }, lo, hi});
  }

  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    Segment seg = gauss_kronrod_15(pieces[k].g, pieces[k].a, pieces[k].b, pieces[k].to_x);
    seg.piece = k;
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }
  std::size_t subdivisions = pieces.size();
  // Segments too narrow to split keep their value and error here.
  double frozen_err = 0.0;
  double frozen_value = 0.0;

  // Error left in frozen segments cannot be reduced; it is reported but does
  // not block convergence.
  auto converged = [&]() {
    return total_err - frozen_err <= std::max(rel_tol * std::abs(total), kAbsoluteFloor);
  };

  while (!converged()) {
    if (heap.empty()) {
      break;
    }
    if (subdivisions >= max_subdivisions) {
      throw QuadratureError("quadrature failed: subdivision cap reached", total, total_err);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= kResolutionUlps * kEpsilon * scale ||
        !(worst.a < mid && mid < worst.b)) {
      frozen_err += worst.error;
      frozen_value += worst.value;
      continue;
    }
    const Piece& pc = pieces[worst.piece];
    Segment left = gauss_kronrod_15(pc.g, worst.a, mid, pc.to_x);
    Segment right = gauss_kronrod_15(pc.g, mid, worst.b, pc.to_x);
    left.piece = right.piece = worst.piece;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  if (!converged()) {
    throw QuadratureError("quadrature failed: intervals exhausted above tolerance", total,
                          total_err);
  }

  // Re-sum to shed accumulated update round-off.
  double sum = frozen_value;
  double err = frozen_err;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return QuadratureResult{sum, std::max(err, 0.0), subdivisions};
}

// ---------------------------------------------------------------------------
// Special functions

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z + 1) for z >= -0.5.
double log_gamma_shifted(double z) {
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 5000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) {
      return h;
    }
  }
  throw DomainError("reg_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_shifted(-x);
  }
  return log_gamma_shifted(x - 1.0);
}

double gamma(double x) { return std::exp(log_gamma(x)); }

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

std::pair<double, double> reg_incomplete_beta_pair(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
    throw DomainError("reg_incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw DomainError("reg_incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};

  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

double reg_incomplete_beta(double a, double b, double x) {
  return reg_incomplete_beta_pair(a, b, x, 1.0 - x).first;
}

// Backed by the C++ standard library (correctly rounded to a few ulp).
double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

// ---------------------------------------------------------------------------
// One-dimensional search

namespace {

double checked_eval(const RealFunction& fn, double x, const char* what) {
  const double v = fn(x);
  if (std::isnan(v)) {
    throw EvaluationError(std::string(what) + ": objective returned NaN", x);
  }
  return v;
}

}  // namespace

BracketResult maximize_scalar(const RealFunction& objective, double lo, double hi,
                              std::size_t seed_points, double tol) {
  if (!(lo < hi)) {
    throw DomainError("maximize_scalar: requires lo < hi");
  }
  if (!(tol > 0.0)) {
    throw DomainError("maximize_scalar: tol must be positive");
  }
  const std::size_t n = std::max<std::size_t>(seed_points, 3);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  auto seed = [&](std::size_t i) { return i + 1 == n ? hi : lo + step * static_cast<double>(i); };

  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = checked_eval(objective, seed(i), "maximize_scalar");
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = seed(best == 0 ? 0 : best - 1);
  double b = seed(std::min(best + 1, n - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = checked_eval(objective, c, "maximize_scalar");
  double fd = checked_eval(objective, d, "maximize_scalar");
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = checked_eval(objective, c, "maximize_scalar");
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = checked_eval(objective, d, "maximize_scalar");
    }
    if (!(a < c && c < b)) {
      break;
    }
  }

  BracketResult result{seed(best), best_value, b - a};
  const double x_mid = 0.5 * (a + b);
  const double candidates[] = {c, d, x_mid};
  for (double x : candidates) {
    const double v = x == c ? fc : (x == d ? fd : checked_eval(objective, x, "maximize_scalar"));
    if (v > result.value) {
      result.value = v;
      result.location = x;
    }
  }
  return result;
}

BoundaryBracket bisect_bracket(const RealPredicate& predicate, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw DomainError("bisect_boundary: requires lo < hi and tol > 0");
  }
  if (!predicate(lo)) {
    throw BracketError("bracket invalid: predicate is false at the lower end");
  }
  if (predicate(hi)) {
    throw BracketError("bracket invalid: predicate is true at the upper end");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) {
      break;
    }
    if (predicate(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

double bisect_boundary(const RealPredicate& predicate, double lo, double hi, double tol) {
  const BoundaryBracket b = bisect_bracket(predicate, lo, hi, tol);
  return 0.5 * (b.last_true + b.first_false);
}

double central_difference(const RealFunction& fn, double x, double scale) {
  static const double kStep = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
  const double h = scale * std::max(1.0, std::abs(x)) * kStep;
  return (-fn(x + 2.0 * h) + 8.0 * fn(x + h) - 8.0 * fn(x - h) + fn(x - 2.0 * h)) / (12.0 * h);
}

}  // namespace biscv::numerics

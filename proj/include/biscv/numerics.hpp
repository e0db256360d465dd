#ifndef BISCV_NUMERICS_HPP
#define BISCV_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <utility>

namespace biscv::numerics {

using RealFunction = std::function<double(double)>;
using RealPredicate = std::function<bool(double)>;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t subdivisions = 1;
};

struct BracketResult {
  double location = 0.0;
  double value = 0.0;
  double bracket_width = 0.0;
};

inline constexpr std::size_t kMaxSubdivisions = 2000;
inline constexpr double kAbsoluteFloor = 1e-14;

/// Adaptive 15-point Gauss-Kronrod quadrature over [lo, hi].
///
/// Either endpoint may be infinite; infinite ranges are mapped onto a finite
/// one with x = t / (1 - t^2). The integrand is never evaluated at an
/// endpoint, so integrable endpoint singularities are fine. Throws
/// QuadratureError when the subdivision cap is reached and EvaluationError
/// when the integrand returns NaN.
QuadratureResult integrate_adaptive(const RealFunction& integrand, double lo, double hi,
                                    double rel_tol,
                                    std::size_t max_subdivisions = kMaxSubdivisions);

// Special functions.

/// Regularized incomplete beta I_x(a, b).
double reg_incomplete_beta(double a, double b, double x);

/// The pair (I_x(a, b), 1 - I_x(a, b)) where the caller supplies y = 1 - x
/// exactly. Both members keep full relative accuracy, which matters in the
/// tails where 1 - F would otherwise cancel.
std::pair<double, double> reg_incomplete_beta_pair(double a, double b, double x, double y);

double erf(double x);
double erfc(double x);

/// log Gamma(x) for x > 0 (Lanczos, g = 7, n = 9).
double log_gamma(double x);
double gamma(double x);
double log_beta(double a, double b);

// One-dimensional search.

/// Maximizes `objective` on [lo, hi]: a coarse scan on `seed_points`
/// equispaced abscissas, then golden-section refinement of the bracket around
/// the best seed. Ties between seeds go to the smaller abscissa.
BracketResult maximize_scalar(const RealFunction& objective, double lo, double hi,
                              std::size_t seed_points, double tol);

struct BoundaryBracket {
  double last_true;
  double first_false;
};

/// Final bracket around the flip of a monotone predicate that holds at lo and
/// fails at hi; the ends are at most tol apart.
BoundaryBracket bisect_bracket(const RealPredicate& predicate, double lo, double hi, double tol);

/// Midpoint of bisect_bracket.
double bisect_boundary(const RealPredicate& predicate, double lo, double hi, double tol);

/// Fourth-order central difference with h = scale * max(1, |x|) * eps^(1/5).
double central_difference(const RealFunction& fn, double x, double scale = 1.0);

}  // namespace biscv::numerics

#endif  // BISCV_NUMERICS_HPP

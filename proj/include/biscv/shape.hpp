#ifndef BISCV_SHAPE_HPP
#define BISCV_SHAPE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "biscv/catalog.hpp"

namespace biscv::shape {

inline constexpr std::size_t kDefaultGridPoints = 2000;
inline constexpr double kDefaultEps = 1e-8;
inline constexpr double kDefaultTol = 1e-9;

/// The index pair (s, s*) with s in (-1, inf] and s* = s / (1 + s) in (-inf, 1].
class ConcavityIndex {
 public:
  double s() const noexcept { return s_; }
  double s_star() const noexcept { return s_star_; }
  /// 1 - s* = 1 / (1 + s); zero exactly when s = inf.
  double one_minus_star() const noexcept { return one_minus_star_; }
  bool is_infinite() const noexcept;

 private:
  friend ConcavityIndex to_index(double s);
  friend ConcavityIndex from_star(double s_star);
  ConcavityIndex(double s, double s_star, double one_minus_star)
      : s_(s), s_star_(s_star), one_minus_star_(one_minus_star) {}

  double s_;
  double s_star_;
  double one_minus_star_;
};

/// Throws DomainError for s <= -1 (outside the range the theory covers).
ConcavityIndex to_index(double s);
/// Throws DomainError for s* > 1.
ConcavityIndex from_star(double s_star);

/// Quantile-spaced abscissas strictly inside J(F): points[i] = quantile(p_i)
/// with p_i equispaced on [eps, 1 - eps].
struct Grid {
  std::vector<double> points;
  double eps = kDefaultEps;

  std::size_t count() const noexcept { return points.size(); }
};

Grid make_grid(const catalog::DistributionSpec& d, std::size_t n = kDefaultGridPoints,
               double eps = kDefaultEps);

enum class Verdict { pass, fail };
enum class Condition { deriv_ineq_iv, hazard_mono_iii, midpoint_def };

std::string to_string(Verdict v);
std::string to_string(Condition c);

/// A single offending abscissa, or a pair (x, y) for the pairwise checks.
struct Witness {
  double x = 0.0;
  std::optional<double> y;
};

struct Certificate {
  Verdict verdict = Verdict::pass;
  Condition condition = Condition::deriv_ineq_iv;
  std::optional<Witness> witness;
  /// Worst normalized slack over everything tested; negative is a violation.
  double margin = 0.0;
  Grid grid;
  double tolerance = kDefaultTol;
  double s = 0.0;
  double s_star = 0.0;
  std::string dist;
  /// Number of points (iv) or pairs (iii, midpoint) examined.
  std::size_t tested = 0;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

struct CRReport {
  double gamma = 0.0;
  double gamma_tilde = 0.0;
  double argmax_gamma = 0.0;
  double argmax_gamma_tilde = 0.0;
  double theoretical_cap = 0.0;
  double s = 0.0;
  std::string dist;
  std::size_t grid_points = 0;
  double eps = kDefaultEps;
};

// Csorgo-Revesz functions; x must lie inside J(F) with f(x) > 0.
double cr(const catalog::DistributionSpec& d, double x);        ///< F (1 - F) f' / f^2
double cr_min(const catalog::DistributionSpec& d, double x);    ///< min{F, 1 - F} f' / f^2
double cr_right(const catalog::DistributionSpec& d, double x);  ///< (1 - F) f' / f^2
double cr_left(const catalog::DistributionSpec& d, double x);   ///< F f' / f^2

/// gamma(F) and gamma~(F) as grid maxima of |cr| and |cr_min|, each refined by
/// golden section between the neighbours of the best grid point.
CRReport cr_report(const catalog::DistributionSpec& d, double s, const Grid& grid);

/// -(1 - s*) f^2 / (1 - F) <= f' <= (1 - s*) f^2 / F at every grid point.
Certificate check_condition_iv(const catalog::DistributionSpec& d, double s, const Grid& grid,
                               double tol = kDefaultTol);
/// f / (1 - F)^(1 - s*) non-decreasing and f / F^(1 - s*) non-increasing
/// across consecutive grid points.
Certificate check_condition_iii(const catalog::DistributionSpec& d, double s, const Grid& grid,
                                double tol = kDefaultTol);
/// Derivative-free test of the definition: h((x + y)/2) >= M_{s*}(h(x), h(y); 1/2)
/// for h in {F, 1 - F}. All pairs when the grid has at most 200 points;
/// otherwise every pair (i, i + 2^k).
Certificate check_midpoint(const catalog::DistributionSpec& d, double s, const Grid& grid,
                           double tol = kDefaultTol);

/// Power mean of order t. Returns 0 for t <= 0 when a or b is 0.
double generalized_mean(double a, double b, double theta, double t);

struct MaxSResult {
  double s = 0.0;
  /// True when the check still passes at the upper end of the bracket.
  bool reached_upper = false;
  std::size_t grid_points = 0;
  double eps = kDefaultEps;
};

/// Largest s in [lo, hi] where check_condition_iv passes, located by
/// bisection to width tol. Assumes passing is nested in s.
MaxSResult max_s(const catalog::DistributionSpec& d, double lo, double hi, double tol,
                 std::size_t grid_points = kDefaultGridPoints, double eps = kDefaultEps,
                 double check_tol = kDefaultTol);

enum class MixtureFamily { normal, t };

catalog::DistributionSpec make_mixture(MixtureFamily family, double r, double delta);

/// Boundary in delta between passing and failing check_condition_iv.
/// Throws BracketError when the bracket does not straddle it.
double delta_threshold(MixtureFamily family, double r, double s, double lo, double hi, double tol,
                       std::size_t grid_points = kDefaultGridPoints, double eps = kDefaultEps,
                       double check_tol = kDefaultTol);

/// Normalized slack of the f' corridor at one point; shared by
/// check_condition_iv and the envelope's corridor so both agree exactly.
/// Returns {upper slack, lower slack}, each >= 0 inside the corridor.
struct CorridorSlack {
  double upper;
  double lower;
};
CorridorSlack corridor_slack(const ConcavityIndex& index, double f, double f_prime, double F,
                             double S);

}  // namespace biscv::shape

#endif  // BISCV_SHAPE_HPP

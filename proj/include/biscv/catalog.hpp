#ifndef BISCV_CATALOG_HPP
#define BISCV_CATALOG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace biscv::catalog {

struct StudentT {
  double r;
};
/// Density C x^(b/2 - 1) / (a + b x)^((a + b)/2) on (0, inf): b numerator and
/// a denominator degrees of freedom.
struct FDist {
  double a;
  double b;
};
/// Density a b^a x^-(a+1) on [b, inf).
struct Pareto {
  double a;
  double b;
};
/// Density C_r (1 - x^2/r)^(r/2) on [-sqrt(r), sqrt(r)].
struct SphericalPower {
  double r;
};
struct Normal {
  double mu;
  double sigma;
};
struct Uniform {
  double lo;
  double hi;
};
/// (1/2) N(-delta, 1) + (1/2) N(delta, 1).
struct NormalMixture {
  double delta;
};
/// (1/2) t_r(. - delta) + (1/2) t_r(. + delta).
struct TMixture {
  double r;
  double delta;
};

using Family = std::variant<StudentT, FDist, Pareto, SphericalPower, Normal, Uniform,
                            NormalMixture, TMixture>;

/// Immutable, validated description of a catalog distribution.
class DistributionSpec {
 public:
  /// Throws DomainError naming the violated parameter constraint.
  explicit DistributionSpec(Family family);

  const Family& family() const noexcept { return family_; }
  /// Short tag used by the spec-string grammar ("t", "pareto", ...).
  std::string tag() const;
  /// (key, value) pairs in grammar order.
  std::vector<std::pair<std::string, double>> parameters() const;
  /// Canonical spec string, e.g. "tmix:r=1,delta=1.475".
  std::string to_string() const;

 private:
  Family family_;
};

/// J(F) = (lo, hi); either end may be infinite.
struct Support {
  double lo;
  double hi;
};

/// Largest s for which the family density is known to be s-concave.
/// nullopt means unknown; +infinity is the uniform case.
using MaxKnownS = std::optional<double>;

DistributionSpec parse_spec(std::string_view text);

double pdf(const DistributionSpec& d, double x);
/// Analytic f'(x). Zero outside the closed support; one-sided limits at the
/// SphericalPower endpoints; NonDifferentiableError at Pareto's x = b and at
/// the Uniform endpoints.
double pdf_deriv(const DistributionSpec& d, double x);
double cdf(const DistributionSpec& d, double x);
/// 1 - F(x), computed without cancellation in the upper tail.
double sf(const DistributionSpec& d, double x);
Support support(const DistributionSpec& d);
/// Inverse cdf by bisection (at most 200 iterations); p in (0, 1).
double quantile(const DistributionSpec& d, double p);
/// The x with sf(x) = q, accurate for small q where 1 - q would round.
double quantile_upper(const DistributionSpec& d, double q);
MaxKnownS max_known_s(const DistributionSpec& d);

/// Normalizing constant of the density where the family has one in closed form
/// (StudentT, FDist, SphericalPower); nullopt otherwise.
std::optional<double> normalizing_constant(const DistributionSpec& d);

/// True when the density is symmetric about some center (used by tests and
/// the Hardy integrals).
bool is_symmetric(const DistributionSpec& d);

}  // namespace biscv::catalog

#endif  // BISCV_CATALOG_HPP

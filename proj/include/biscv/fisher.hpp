#ifndef BISCV_FISHER_HPP
#define BISCV_FISHER_HPP

#include <cstddef>
#include <string>

#include "biscv/catalog.hpp"
#include "biscv/shape.hpp"

namespace biscv::fisher {

inline constexpr double kDefaultRelTol = 1e-8;
/// Any truncated estimate above this counts as divergence.
inline constexpr double kDivergenceCeiling = 1e12;

/// A non-negative integral over J(F). When `divergent` is set, `value` holds
/// the last truncated estimate and the integral is treated as +inf.
struct IntegralValue {
  double value = 0.0;
  bool divergent = false;
  double abs_error_estimate = 0.0;
};

/// Location Fisher information I_f = integral of (f'/f)^2 f.
IntegralValue fisher_info(const catalog::DistributionSpec& d, double rel_tol = kDefaultRelTol);

struct HardyPair {
  IntegralValue left;   ///< integral of (f / F)^2 f
  IntegralValue right;  ///< integral of (f / (1 - F))^2 f
};

HardyPair hardy_integrals(const catalog::DistributionSpec& d, double rel_tol = kDefaultRelTol);

/// I_f for SphericalPower(r): (r/2) Gamma(r/2 - 1) Gamma((r + 3)/2) / Gamma(r/2 + 1)^2.
/// Throws DomainError for r <= 2 where the integral diverges.
double fisher_closed_form_spherical(double r);

struct FisherReport {
  IntegralValue info;
  HardyPair hardy;
  /// max(hardy) / 4, a lower bound on I_f.
  double chain_lo = 0.0;
  /// 2 max(hardy) / (1 + s)^2, an upper bound on I_f under bi-s*-concavity.
  double chain_hi = 0.0;
  double s = 0.0;
  std::string dist;
  /// I_f and both Hardy integrals diverge together.
  bool all_infinite = false;
  bool hardy_holds = true;  ///< each Hardy integral <= 4 I_f
  bool upper_holds = true;  ///< I_f <= chain_hi
  bool lower_holds = true;  ///< chain_hi <= 8 I_f / (1 + s)^2
  double rel_tol = kDefaultRelTol;
};

/// Evaluates the chain after confirming bi-s*-concavity with
/// shape::check_condition_iv on `grid`; throws PreconditionError otherwise.
FisherReport check_fisher_chain(const catalog::DistributionSpec& d, double s,
                                const shape::Grid& grid, double rel_tol = kDefaultRelTol);

}  // namespace biscv::fisher

#endif  // BISCV_FISHER_HPP

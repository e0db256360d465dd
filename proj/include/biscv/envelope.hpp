#ifndef BISCV_ENVELOPE_HPP
#define BISCV_ENVELOPE_HPP

#include <ostream>
#include <vector>

#include "biscv/catalog.hpp"
#include "biscv/shape.hpp"

namespace biscv::envelope {

/// One row of the bound table. F_U may exceed 1 (or be +inf where the bound
/// is vacuous); F_U_clamped = min(F_U, 1) is carried for plotting.
struct EnvelopeRow {
  double x;
  double F;
  double F_L;
  double F_U;
  double f;
  double FL_prime;
  double FU_prime;
  double f_prime;
  double fp_lo;
  double fp_hi;
  double F_U_clamped;
};

// Upper and lower transforms of F:
//   F_U = (1 - (1 - F)^s*) / s*,   F_L = 1 + (F^s* - 1) / s*
// (one expression covers s < 0 and s > 0), with the s* = 0 limits
//   F_U = -log(1 - F),             F_L = 1 + log F.
double f_upper(const catalog::DistributionSpec& d, double s, double x);
double f_lower(const catalog::DistributionSpec& d, double s, double x);

/// F_U' = f / (1 - F)^(1 - s*), the s*-hazard.
double fu_prime(const catalog::DistributionSpec& d, double s, double x);
/// F_L' = f / F^(1 - s*), the reverse s*-hazard.
double fl_prime(const catalog::DistributionSpec& d, double s, double x);

struct Corridor {
  double lo;
  double hi;
};

/// [-(1 - s*) f^2 / (1 - F), (1 - s*) f^2 / F].
Corridor fprime_corridor(const catalog::DistributionSpec& d, double s, double x);

/// True when f'(x) lies in the corridor up to the relative slack used by
/// shape::check_condition_iv.
bool in_corridor(const catalog::DistributionSpec& d, double s, double x, double tol);

struct Band {
  double lower;
  double upper;
  /// False where the bound is undefined for s > 0 (t outside (a - x, inf) for
  /// the upper side, outside (-inf, b - x) for the lower side); the value is
  /// then the vacuous 1 or 0.
  bool upper_defined = true;
  bool lower_defined = true;
};

/// Two-sided bound on F(x + t) implied by bi-s*-concavity at x in J(F).
Band pointwise_band(const catalog::DistributionSpec& d, double s, double x, double t);

std::vector<EnvelopeRow> emit_envelope_table(const catalog::DistributionSpec& d, double s,
                                             const shape::Grid& grid);

inline constexpr const char* kCsvHeader = "x,F,F_L,F_U,f,FL_prime,FU_prime,f_prime,fp_lo,fp_hi";

/// Writes the header and one line per row, 17 significant digits, '\n' endings.
void write_csv(std::ostream& out, const std::vector<EnvelopeRow>& rows);

}  // namespace biscv::envelope

#endif  // BISCV_ENVELOPE_HPP

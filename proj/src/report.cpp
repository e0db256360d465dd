#include "biscv/report.hpp"

#include <cmath>

namespace biscv::report {

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const shape::Grid& grid) {
  Json j;
  j["count"] = grid.count();
  j["eps"] = real(grid.eps);
  j["lo"] = grid.points.empty() ? Json(nullptr) : real(grid.points.front());
  j["hi"] = grid.points.empty() ? Json(nullptr) : real(grid.points.back());
  return j;
}

Json to_json(const shape::Certificate& cert) {
  Json j;
  j["verdict"] = shape::to_string(cert.verdict);
  j["condition"] = shape::to_string(cert.condition);
  if (cert.witness) {
    Json w;
    w["x"] = real(cert.witness->x);
    if (cert.witness->y) w["y"] = real(*cert.witness->y);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["margin"] = real(cert.margin);
  j["grid"] = to_json(cert.grid);
  j["tolerance"] = real(cert.tolerance);
  j["s"] = real(cert.s);
  j["s_star"] = real(cert.s_star);
  j["dist"] = cert.dist;
  j["tested"] = cert.tested;
  return j;
}

Json to_json(const shape::CRReport& rep) {
  Json j;
  j["gamma"] = real(rep.gamma);
  j["gamma_tilde"] = real(rep.gamma_tilde);
  j["argmax_gamma"] = real(rep.argmax_gamma);
  j["argmax_gamma_tilde"] = real(rep.argmax_gamma_tilde);
  j["theoretical_cap"] = real(rep.theoretical_cap);
  j["s"] = real(rep.s);
  j["dist"] = rep.dist;
  j["grid_points"] = rep.grid_points;
  j["eps"] = real(rep.eps);
  return j;
}

Json to_json(const shape::MaxSResult& res) {
  Json j;
  j["s"] = real(res.s);
  j["reached_upper"] = res.reached_upper;
  j["grid_points"] = res.grid_points;
  j["eps"] = real(res.eps);
  return j;
}

Json to_json(const fisher::IntegralValue& v) {
  Json j;
  j["value"] = v.divergent ? Json("inf") : real(v.value);
  j["divergent"] = v.divergent;
  j["last_estimate"] = real(v.value);
  j["abs_error_estimate"] = real(v.abs_error_estimate);
  return j;
}

Json to_json(const fisher::FisherReport& rep) {
  Json j;
  j["I_f"] = to_json(rep.info);
  j["hardy_left"] = to_json(rep.hardy.left);
  j["hardy_right"] = to_json(rep.hardy.right);
  j["chain_lo"] = real(rep.chain_lo);
  j["chain_hi"] = real(rep.chain_hi);
  j["s"] = real(rep.s);
  j["dist"] = rep.dist;
  j["all_infinite"] = rep.all_infinite;
  j["hardy_holds"] = rep.hardy_holds;
  j["upper_holds"] = rep.upper_holds;
  j["lower_holds"] = rep.lower_holds;
  j["rel_tol"] = real(rep.rel_tol);
  return j;
}

Json to_json(const envelope::EnvelopeRow& row) {
  Json j;
  j["x"] = real(row.x);
  j["F"] = real(row.F);
  j["F_L"] = real(row.F_L);
  j["F_U"] = real(row.F_U);
  j["f"] = real(row.f);
  j["FL_prime"] = real(row.FL_prime);
  j["FU_prime"] = real(row.FU_prime);
  j["f_prime"] = real(row.f_prime);
  j["fp_lo"] = real(row.fp_lo);
  j["fp_hi"] = real(row.fp_hi);
  j["F_U_clamped"] = real(row.F_U_clamped);
  return j;
}

Json catalog_metadata(const catalog::DistributionSpec& d) {
  Json j;
  j["dist"] = d.to_string();
  j["family"] = d.tag();
  Json params = Json::object();
  for (const auto& [key, value] : d.parameters()) params[key] = real(value);
  j["parameters"] = params;
  const auto supp = catalog::support(d);
  j["support"] = Json{{"lo", real(supp.lo)}, {"hi", real(supp.hi)}};
  const auto known = catalog::max_known_s(d);
  j["max_known_s"] = known ? real(*known) : Json(nullptr);
  const auto constant = catalog::normalizing_constant(d);
  j["normalizing_constant"] = constant ? real(*constant) : Json(nullptr);
  j["symmetric"] = catalog::is_symmetric(d);
  return j;
}

Json error_document(const std::string& type, const std::string& message, const Json& details) {
  Json inner;
  inner["type"] = type;
  inner["message"] = message;
  for (const auto& [key, value] : details.items()) inner[key] = value;
  return Json{{"error", inner}};
}

}  // namespace biscv::report

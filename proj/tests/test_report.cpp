#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "biscv/catalog.hpp"
#include "biscv/envelope.hpp"
#include "biscv/fisher.hpp"
#include "biscv/report.hpp"
#include "biscv/shape.hpp"

using namespace biscv;
using report::Json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) out.push_back(key);
  return out;
}

}  // namespace

TEST_CASE("real values encode non-finite numbers", "[json]") {
  CHECK(report::real(1.5) == Json(1.5));
  CHECK(report::real(kInf) == Json("inf"));
  CHECK(report::real(-kInf) == Json("-inf"));
  CHECK(report::real(std::nan("")).is_null());
  // 17 significant digits survive a dump and parse.
  const double x = 0.1 + 0.2;
  CHECK(Json::parse(report::real(x).dump()).get<double>() == x);
}

TEST_CASE("certificate fields", "[json]") {
  const auto d = catalog::parse_spec("normmix:delta=1.6");
  const auto g = shape::make_grid(d, 100);
  const auto fail = report::to_json(shape::check_condition_iii(d, 0.0, g));
  CHECK(keys(fail) == std::vector<std::string>{"verdict", "condition", "witness", "margin", "grid",
                                               "tolerance", "s", "s_star", "dist", "tested"});
  CHECK(fail["verdict"] == "fail");
  CHECK(fail["condition"] == "hazard_mono_iii");
  CHECK(fail["witness"].contains("x"));
  CHECK(fail["witness"].contains("y"));
  CHECK(keys(fail["grid"]) == std::vector<std::string>{"count", "eps", "lo", "hi"});
  CHECK(fail["grid"]["count"] == 100);

  const auto pass = report::to_json(shape::check_condition_iv(catalog::parse_spec("normal"), 0.0,
                                                              shape::make_grid(catalog::parse_spec("normal"), 100)));
  CHECK(pass["witness"].is_null());
  CHECK(pass["condition"] == "deriv_ineq_iv");

  const auto u = catalog::parse_spec("uniform");
  const auto inf = report::to_json(shape::check_condition_iv(u, kInf, shape::make_grid(u, 50)));
  CHECK(inf["s"] == "inf");
  CHECK(inf["s_star"] == 1.0);
}

TEST_CASE("gamma and search reports", "[json]") {
  const auto d = catalog::parse_spec("t:r=4");
  const auto rep = report::to_json(shape::cr_report(d, -0.2, shape::make_grid(d, 200)));
  CHECK(keys(rep) == std::vector<std::string>{"gamma", "gamma_tilde", "argmax_gamma",
                                              "argmax_gamma_tilde", "theoretical_cap", "s", "dist",
                                              "grid_points", "eps"});
  const auto res = report::to_json(shape::MaxSResult{0.5, true, 2000, 1e-8});
  CHECK(keys(res) == std::vector<std::string>{"s", "reached_upper", "grid_points", "eps"});
  CHECK(res["reached_upper"] == true);
}

TEST_CASE("integral values report divergence", "[json]") {
  const auto finite = report::to_json(fisher::IntegralValue{1.25, false, 1e-12});
  CHECK(finite["value"] == 1.25);
  CHECK(finite["divergent"] == false);
  const auto divergent = report::to_json(fisher::IntegralValue{38.9, true, 1e-9});
  CHECK(divergent["value"] == "inf");
  CHECK(divergent["last_estimate"] == 38.9);

  const auto d = catalog::parse_spec("normal");
  const auto chain = report::to_json(fisher::check_fisher_chain(d, 0.0, shape::make_grid(d, 200)));
  CHECK(keys(chain) == std::vector<std::string>{"I_f", "hardy_left", "hardy_right", "chain_lo",
                                                "chain_hi", "s", "dist", "all_infinite",
                                                "hardy_holds", "upper_holds", "lower_holds",
                                                "rel_tol"});
}

TEST_CASE("envelope rows carry the CSV columns plus the clamped bound", "[json]") {
  const auto d = catalog::parse_spec("t:r=1");
  const auto rows = envelope::emit_envelope_table(d, -0.5, shape::make_grid(d, 20));
  const auto j = report::to_json(rows.back());
  CHECK(keys(j) == std::vector<std::string>{"x", "F", "F_L", "F_U", "f", "FL_prime", "FU_prime",
                                            "f_prime", "fp_lo", "fp_hi", "F_U_clamped"});
  CHECK(j["F_U_clamped"] == 1.0);
}

TEST_CASE("catalog metadata", "[json]") {
  const auto t = report::catalog_metadata(catalog::parse_spec("t:r=3"));
  CHECK(t["family"] == "t");
  CHECK(t["parameters"]["r"] == 3.0);
  CHECK(t["support"]["lo"] == "-inf");
  CHECK(t["max_known_s"] == -0.25);
  CHECK(t["symmetric"] == true);

  const auto mix = report::catalog_metadata(catalog::parse_spec("tmix:r=1,delta=0.5"));
  CHECK(mix["max_known_s"].is_null());
  CHECK(keys(mix["parameters"]) == std::vector<std::string>{"r", "delta"});

  CHECK(report::catalog_metadata(catalog::parse_spec("uniform"))["max_known_s"] == "inf");
}

TEST_CASE("error documents", "[json]") {
  const auto e = report::error_document("bracket_error", "bracket invalid", Json{{"lo", 0.1}});
  CHECK(e.dump() == R"({"error":{"type":"bracket_error","message":"bracket invalid","lo":0.1}})");
  CHECK(keys(report::error_document("domain_error", "m")["error"]) ==
        std::vector<std::string>{"type", "message"});
}

#include "biscv/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "biscv/catalog.hpp"
#include "biscv/envelope.hpp"
#include "biscv/errors.hpp"
#include "biscv/fisher.hpp"
#include "biscv/report.hpp"
#include "biscv/shape.hpp"

namespace biscv::cli {

namespace {

using report::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kDefaultWidth = 1e-4;
constexpr std::size_t kMinGridPoints = 16;

// Accepts anything strtod does, including "inf", but no trailing junk.
double parse_real(const std::string& text, const std::string& name) {
  if (text.empty()) throw UsageError("--" + name + ": empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || std::isnan(v) || errno == ERANGE) {
    throw UsageError("--" + name + ": not a number: '" + text + "'");
  }
  return v;
}

struct Common {
  std::string dist;
  std::string s_text;
  std::string s_star_text;
  std::optional<std::size_t> grid_points;
  double eps = shape::kDefaultEps;
  double tol = shape::kDefaultTol;
  std::string output;
};

void add_dist(CLI::App* sub, Common& c) {
  sub->add_option("--dist", c.dist, "distribution spec string, e.g. t:r=1")->required();
}

void add_index(CLI::App* sub, Common& c) {
  auto* s = sub->add_option("--s", c.s_text, "concavity index s in (-1, inf]");
  auto* star = sub->add_option("--s-star", c.s_star_text, "index s* = s/(1+s) in (-inf, 1]");
  s->excludes(star);
}

void add_grid(CLI::App* sub, Common& c) {
  sub->add_option("--grid-points", c.grid_points, "quantile grid size (default 2000)");
  sub->add_option("--eps", c.eps, "tail mass excluded from the grid (default 1e-8)");
  sub->add_option("--tol", c.tol, "relative checker slack (default 1e-9)");
}

void add_output(CLI::App* sub, Common& c) {
  sub->add_option("--output", c.output, "write the document here instead of stdout");
}

catalog::DistributionSpec resolve_dist(const Common& c) {
  try {
    return catalog::parse_spec(c.dist);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--dist: ") + e.what());
  } catch (const DomainError& e) {
    throw UsageError(std::string("--dist: ") + e.what());
  }
}

shape::ConcavityIndex resolve_index(const Common& c) {
  try {
    if (!c.s_text.empty()) return shape::to_index(parse_real(c.s_text, "s"));
    if (!c.s_star_text.empty()) return shape::from_star(parse_real(c.s_star_text, "s-star"));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("one of --s or --s-star is required");
}

std::size_t resolve_grid_points(const Common& c) {
  std::size_t n = shape::kDefaultGridPoints;
  if (c.grid_points) {
    n = *c.grid_points;
  } else if (const char* env = std::getenv(kGridPointsEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(env, &end, 10);
    if (*end != '\0' || errno == ERANGE || v < 0) {
      throw UsageError(std::string(kGridPointsEnv) + ": not a count: '" + env + "'");
    }
    n = static_cast<std::size_t>(v);
  }
  if (n < kMinGridPoints) {
    throw UsageError("grid_points must be >= " + std::to_string(kMinGridPoints));
  }
  return n;
}

void validate_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.1)) throw UsageError("--eps must lie in (0, 0.1)");
}

Json base_config(const std::string& command, const Common& c) {
  Json j;
  j["command"] = command;
  // Canonical form, so defaulted parameters are recorded too.
  try {
    j["dist"] = catalog::parse_spec(c.dist).to_string();
  } catch (const std::exception&) {
    j["dist"] = c.dist;
  }
  return j;
}

void record_index(Json& config, const shape::ConcavityIndex& index) {
  config["s"] = report::real(index.s());
  config["s_star"] = report::real(index.s_star());
}

void record_grid(Json& config, std::size_t n, const Common& c) {
  config["grid_points"] = n;
  config["eps"] = report::real(c.eps);
  config["tol"] = report::real(c.tol);
}

struct Emitted {
  std::string body;
  int code = kExitPass;
};

Emitted emit_json(const Json& doc, int code) { return Emitted{doc.dump(2) + "\n", code}; }

// --- subcommands -----------------------------------------------------------

Emitted cmd_check(const Common& c, const std::string& method) {
  const auto d = resolve_dist(c);
  const auto index = resolve_index(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  Json config = base_config("check", c);
  record_index(config, index);
  record_grid(config, n, c);
  config["method"] = method;

  const auto grid = shape::make_grid(d, n, c.eps);
  std::vector<shape::Certificate> certs;
  if (method == "iv" || method == "all") {
    certs.push_back(shape::check_condition_iv(d, index.s(), grid, c.tol));
  }
  if (method == "iii" || method == "all") {
    certs.push_back(shape::check_condition_iii(d, index.s(), grid, c.tol));
  }
  if (method == "midpoint" || method == "all") {
    certs.push_back(shape::check_midpoint(d, index.s(), grid, c.tol));
  }
  bool all_pass = true;
  Json list = Json::array();
  for (const auto& cert : certs) {
    all_pass = all_pass && cert.passed();
    list.push_back(report::to_json(cert));
  }
  Json doc;
  doc["config"] = config;
  doc["verdict"] = all_pass ? "pass" : "fail";
  doc["certificates"] = list;
  return emit_json(doc, all_pass ? kExitPass : kExitFail);
}

Emitted cmd_gamma(const Common& c) {
  const auto d = resolve_dist(c);
  const auto index = resolve_index(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  Json config = base_config("gamma", c);
  record_index(config, index);
  record_grid(config, n, c);
  const auto grid = shape::make_grid(d, n, c.eps);
  Json doc;
  doc["config"] = config;
  doc["report"] = report::to_json(shape::cr_report(d, index.s(), grid));
  return emit_json(doc, kExitPass);
}

Emitted cmd_max_s(const Common& c, const std::string& lo_text, const std::string& hi_text,
                  double width) {
  const auto d = resolve_dist(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  const double lo = parse_real(lo_text, "lo");
  const double hi = parse_real(hi_text, "hi");
  if (!(lo < hi)) throw UsageError("--lo must be < --hi");
  if (!(width > 0.0)) throw UsageError("--width must be positive");
  Json config = base_config("max-s", c);
  config["lo"] = report::real(lo);
  config["hi"] = report::real(hi);
  config["width"] = report::real(width);
  record_grid(config, n, c);
  const auto res = shape::max_s(d, lo, hi, width, n, c.eps, c.tol);
  Json doc;
  doc["config"] = config;
  doc["result"] = report::to_json(res);
  return emit_json(doc, kExitPass);
}

Emitted cmd_threshold(const Common& c, const std::string& family, double r,
                      const std::string& lo_text, const std::string& hi_text, double width) {
  const auto index = resolve_index(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  const double lo = parse_real(lo_text, "lo");
  const double hi = parse_real(hi_text, "hi");
  if (!(lo > 0.0 && lo < hi)) throw UsageError("need 0 < --lo < --hi");
  if (!(width > 0.0)) throw UsageError("--width must be positive");
  if (!(r > 0.0)) throw UsageError("--r must be > 0");
  const auto fam = family == "tmix" ? shape::MixtureFamily::t : shape::MixtureFamily::normal;

  Json config;
  config["command"] = "threshold";
  config["family"] = family;
  if (fam == shape::MixtureFamily::t) config["r"] = report::real(r);
  record_index(config, index);
  config["lo"] = report::real(lo);
  config["hi"] = report::real(hi);
  config["width"] = report::real(width);
  record_grid(config, n, c);
  const double delta =
      shape::delta_threshold(fam, r, index.s(), lo, hi, width, n, c.eps, c.tol);
  Json doc;
  doc["config"] = config;
  doc["delta"] = report::real(delta);
  return emit_json(doc, kExitPass);
}

Emitted cmd_envelope(const Common& c, const std::string& format) {
  const auto d = resolve_dist(c);
  const auto index = resolve_index(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  const auto grid = shape::make_grid(d, n, c.eps);
  const auto rows = envelope::emit_envelope_table(d, index.s(), grid);
  if (format == "csv") {
    std::ostringstream os;
    envelope::write_csv(os, rows);
    return Emitted{os.str(), kExitPass};
  }
  Json config = base_config("envelope", c);
  record_index(config, index);
  record_grid(config, n, c);
  Json list = Json::array();
  for (const auto& row : rows) list.push_back(report::to_json(row));
  Json doc;
  doc["config"] = config;
  doc["rows"] = list;
  return emit_json(doc, kExitPass);
}

Emitted cmd_fisher(const Common& c, double rel_tol) {
  const auto d = resolve_dist(c);
  const auto index = resolve_index(c);
  const auto n = resolve_grid_points(c);
  validate_eps(c.eps);
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
  Json config = base_config("fisher", c);
  record_index(config, index);
  record_grid(config, n, c);
  config["rel_tol"] = report::real(rel_tol);
  const auto grid = shape::make_grid(d, n, c.eps);
  const auto rep = fisher::check_fisher_chain(d, index.s(), grid, rel_tol);
  Json doc;
  doc["config"] = config;
  doc["report"] = report::to_json(rep);
  const bool holds = rep.hardy_holds && rep.upper_holds && rep.lower_holds;
  return emit_json(doc, holds ? kExitPass : kExitFail);
}

Emitted cmd_catalog(const Common& c) {
  const auto d = resolve_dist(c);
  Json doc;
  doc["config"] = base_config("catalog", c);
  doc["metadata"] = report::catalog_metadata(d);
  return emit_json(doc, kExitPass);
}

Json describe_failure(const std::exception& ex) {
  if (const auto* e = dynamic_cast<const QuadratureError*>(&ex)) {
    return report::error_document("quadrature_error", e->what(),
                                  Json{{"best_estimate", report::real(e->best_estimate())},
                                       {"error_estimate", report::real(e->error_estimate())}});
  }
  if (const auto* e = dynamic_cast<const EvaluationError*>(&ex)) {
    return report::error_document("evaluation_error", e->what(),
                                  Json{{"abscissa", report::real(e->abscissa())}});
  }
  if (const auto* e = dynamic_cast<const NonDifferentiableError*>(&ex)) {
    return report::error_document("non_differentiable", e->what(),
                                  Json{{"x", report::real(e->x())}});
  }
  if (dynamic_cast<const BracketError*>(&ex)) {
    return report::error_document("bracket_error", ex.what());
  }
  if (dynamic_cast<const PreconditionError*>(&ex)) {
    return report::error_document("precondition_error", ex.what());
  }
  if (dynamic_cast<const DomainError*>(&ex)) {
    return report::error_document("domain_error", ex.what());
  }
  return report::error_document("internal_error", ex.what());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bi-s*-concavity toolkit", "biscv"};
  app.require_subcommand(1);

  Common common;
  std::string method = "iv";
  std::string lo_text;
  std::string hi_text;
  double width = kDefaultWidth;
  std::string family;
  double r = 1.0;
  std::string format = "csv";
  double rel_tol = fisher::kDefaultRelTol;

  auto* check = app.add_subcommand("check", "test bi-s*-concavity on a quantile grid");
  add_dist(check, common);
  add_index(check, common);
  add_grid(check, common);
  add_output(check, common);
  check->add_option("--method", method, "iv | iii | midpoint | all (default iv)")
      ->check(CLI::IsMember({"iv", "iii", "midpoint", "all"}));

  auto* gamma = app.add_subcommand("gamma", "Csorgo-Revesz constants gamma and gamma~");
  add_dist(gamma, common);
  add_index(gamma, common);
  add_grid(gamma, common);
  add_output(gamma, common);

  auto* max_s = app.add_subcommand("max-s", "largest s passing condition (iv) in [lo, hi]");
  add_dist(max_s, common);
  add_grid(max_s, common);
  add_output(max_s, common);
  max_s->add_option("--lo", lo_text, "lower end of the s bracket")->required();
  max_s->add_option("--hi", hi_text, "upper end of the s bracket")->required();
  max_s->add_option("--width", width, "bisection width (default 1e-4)");

  auto* threshold = app.add_subcommand("threshold", "mixture separation threshold delta*");
  threshold->add_option("--family", family, "normmix | tmix")
      ->required()
      ->check(CLI::IsMember({"normmix", "tmix"}));
  threshold->add_option("--r", r, "t degrees of freedom for tmix (default 1)");
  add_index(threshold, common);
  add_grid(threshold, common);
  add_output(threshold, common);
  threshold->add_option("--lo", lo_text, "lower end of the delta bracket")->required();
  threshold->add_option("--hi", hi_text, "upper end of the delta bracket")->required();
  threshold->add_option("--width", width, "bisection width (default 1e-4)");

  auto* env = app.add_subcommand("envelope", "table of F_L, F_U and the f' corridor");
  add_dist(env, common);
  add_index(env, common);
  add_grid(env, common);
  add_output(env, common);
  env->add_option("--format", format, "csv | json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* fish = app.add_subcommand("fisher", "Fisher information and the Hardy chain");
  add_dist(fish, common);
  add_index(fish, common);
  add_grid(fish, common);
  add_output(fish, common);
  fish->add_option("--rel-tol", rel_tol, "quadrature relative tolerance (default 1e-8)");

  auto* cat = app.add_subcommand("catalog", "family metadata");
  add_dist(cat, common);
  add_output(cat, common);

  std::vector<std::string> storage{"biscv"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "biscv: " << e.what() << "\n";
    return kExitUsage;
  }

  Emitted result;
  try {
    if (check->parsed()) {
      result = cmd_check(common, method);
    } else if (gamma->parsed()) {
      result = cmd_gamma(common);
    } else if (max_s->parsed()) {
      result = cmd_max_s(common, lo_text, hi_text, width);
    } else if (threshold->parsed()) {
      result = cmd_threshold(common, family, r, lo_text, hi_text, width);
    } else if (env->parsed()) {
      result = cmd_envelope(common, format);
    } else if (fish->parsed()) {
      result = cmd_fisher(common, rel_tol);
    } else {
      result = cmd_catalog(common);
    }
  } catch (const UsageError& e) {
    err << "biscv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    result = Emitted{describe_failure(e).dump(2) + "\n", kExitError};
  }

  if (common.output.empty()) {
    out << result.body;
    out.flush();
  } else {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) {
      err << "biscv: cannot open --output '" << common.output << "'\n";
      return kExitError;
    }
    file << result.body;
  }
  return result.code;
}

}  // namespace biscv::cli

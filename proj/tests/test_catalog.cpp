#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "biscv/catalog.hpp"
#include "biscv/errors.hpp"
#include "biscv/numerics.hpp"

using namespace biscv;
using catalog::parse_spec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* const kSpecs[] = {"t:r=0.5",         "t:r=1",      "t:r=4",     "fdist:a=4,b=6",
                              "fdist:a=1,b=3",   "pareto:a=2,b=1", "pareto:a=5,b=2",
                              "gpow:r=1",        "gpow:r=4",   "normal",    "normal:mu=3,sigma=2",
                              "uniform",         "uniform:lo=-1,hi=2",  "normmix:delta=1.3",
                              "tmix:r=1,delta=1.3"};

double boost_mass(const catalog::DistributionSpec& d, double lo, double hi) {
  auto f = [&](double x) { return catalog::pdf(d, x); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

}  // namespace

TEST_CASE("spec strings parse and print canonically", "[parse]") {
  CHECK(parse_spec("t:r=1").to_string() == "t:r=1");
  CHECK(parse_spec("tmix:r=1,delta=1.3").to_string() == "tmix:r=1,delta=1.3");
  CHECK(parse_spec("pareto:a=2,b=1").to_string() == "pareto:a=2,b=1");
  CHECK(parse_spec("gpow:r=4").to_string() == "gpow:r=4");
  CHECK(parse_spec("fdist:a=4,b=6").to_string() == "fdist:a=4,b=6");
  CHECK(parse_spec("normmix:delta=1.34").to_string() == "normmix:delta=1.34");
  CHECK(parse_spec("normal").to_string() == "normal:mu=0,sigma=1");
  CHECK(parse_spec("uniform").to_string() == "uniform:lo=0,hi=1");
  CHECK(parse_spec("fdist:b=6,a=4").to_string() == "fdist:a=4,b=6");
  CHECK(parse_spec("t:r=+2.5e0").to_string() == "t:r=2.5");
  const auto d = parse_spec("tmix:r=1,delta=1.3");
  const auto* mix = std::get_if<catalog::TMixture>(&d.family());
  REQUIRE(mix != nullptr);
  CHECK(mix->r == 1.0);
  CHECK(mix->delta == 1.3);
  CHECK(parse_spec(d.to_string()).to_string() == d.to_string());
}

TEST_CASE("malformed spec strings are rejected with a position", "[parse]") {
  CHECK_THROWS_AS(parse_spec("cauchy:r=1"), ParseError);
  CHECK_THROWS_AS(parse_spec("t:q=1"), ParseError);
  CHECK_THROWS_AS(parse_spec("t:r=1,r=2"), ParseError);
  CHECK_THROWS_AS(parse_spec("pareto:a=2"), ParseError);
  CHECK_THROWS_AS(parse_spec("t:r=abc"), ParseError);
  CHECK_THROWS_AS(parse_spec("t:r=1,"), ParseError);
  CHECK_THROWS_AS(parse_spec(""), ParseError);
  CHECK_THROWS_AS(parse_spec("t"), ParseError);
  // Position is the 0-based offset of the first offending character.
  try {
    parse_spec("t:r=1x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  try {
    parse_spec("t:s=1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("parameter constraints raise domain errors", "[parse]") {
  CHECK_THROWS_AS(parse_spec("t:r=0"), DomainError);
  CHECK_THROWS_AS(parse_spec("t:r=-1"), DomainError);
  CHECK_THROWS_AS(parse_spec("normal:sigma=0"), DomainError);
  CHECK_THROWS_AS(parse_spec("uniform:lo=1,hi=1"), DomainError);
  CHECK_THROWS_AS(parse_spec("tmix:r=1,delta=0"), DomainError);
  try {
    parse_spec("gpow:r=-2");
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("r must be > 0") != std::string::npos);
  }
}

TEST_CASE("densities integrate to one", "[pdf]") {
  for (const char* spec : kSpecs) {
    INFO(spec);
    const auto d = parse_spec(spec);
    const auto supp = catalog::support(d);
    // Split at the median so heavy tails and endpoint singularities stay separated.
    const double mid = catalog::quantile(d, 0.5);
    const double left = numerics::integrate_adaptive([&](double x) { return catalog::pdf(d, x); },
                                                     supp.lo, mid, 1e-13)
                            .value;
    const double right = numerics::integrate_adaptive(
                             [&](double x) { return catalog::pdf(d, x); }, mid, supp.hi, 1e-13)
                             .value;
    CHECK_THAT(left + right, WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("normalizing constants match the closed forms", "[pdf]") {
  for (const double r : {0.5, 1.0, 4.0}) {
    INFO("r=" << r);
    // The published t constant omits the 1/sqrt(r) of the scaled kernel.
    const double published = boost::math::tgamma((r + 1) / 2) /
                             (std::sqrt(std::numbers::pi) * boost::math::tgamma(r / 2));
    const auto c = catalog::normalizing_constant(parse_spec("t:r=" + std::to_string(r)));
    REQUIRE(c.has_value());
    CHECK_THAT(*c * std::sqrt(r), WithinRel(published, 1e-12));
  }
  for (const double r : {1.0, 4.0, 6.0}) {
    const double expected = boost::math::tgamma((3 + r) / 2) /
                            (std::sqrt(std::numbers::pi * r) * boost::math::tgamma(1 + r / 2));
    const auto c = catalog::normalizing_constant(parse_spec("gpow:r=" + std::to_string(r)));
    REQUIRE(c.has_value());
    CHECK_THAT(*c, WithinRel(expected, 1e-12));
  }
  CHECK_FALSE(catalog::normalizing_constant(parse_spec("normmix:delta=1")).has_value());
}

TEST_CASE("cdfs agree with boost distributions", "[cdf]") {
  for (const double r : {0.5, 1.0, 4.0}) {
    const auto d = parse_spec("t:r=" + std::to_string(r));
    const boost::math::students_t_distribution<double> ref(r);
    for (const double x : {-1e6, -30.0, -2.0, -0.3, 0.0, 0.7, 5.0, 1e8}) {
      INFO("r=" << r << " x=" << x);
      CHECK_THAT(catalog::cdf(d, x), WithinRel(boost::math::cdf(ref, x), 1e-12));
      CHECK_THAT(catalog::sf(d, x),
                 WithinRel(boost::math::cdf(boost::math::complement(ref, x)), 1e-12));
      CHECK_THAT(catalog::pdf(d, x), WithinRel(boost::math::pdf(ref, x), 1e-12));
    }
  }
  {
    const auto d = parse_spec("fdist:a=4,b=6");
    const boost::math::fisher_f_distribution<double> ref(6.0, 4.0);
    for (const double x : {1e-6, 0.1, 1.0, 3.0, 50.0, 1e5}) {
      INFO("x=" << x);
      CHECK_THAT(catalog::cdf(d, x), WithinRel(boost::math::cdf(ref, x), 1e-12));
      CHECK_THAT(catalog::sf(d, x),
                 WithinRel(boost::math::cdf(boost::math::complement(ref, x)), 1e-12));
      CHECK_THAT(catalog::pdf(d, x), WithinRel(boost::math::pdf(ref, x), 1e-12));
    }
  }
  {
    const auto d = parse_spec("normal:mu=3,sigma=2");
    const boost::math::normal_distribution<double> ref(3.0, 2.0);
    for (const double x : {-60.0, -4.0, 3.0, 5.5, 40.0}) {
      INFO("x=" << x);
      CHECK_THAT(catalog::cdf(d, x), WithinRel(boost::math::cdf(ref, x), 1e-12));
      CHECK_THAT(catalog::sf(d, x),
                 WithinRel(boost::math::cdf(boost::math::complement(ref, x)), 1e-12));
    }
  }
  {
    const auto d = parse_spec("gpow:r=3");
    for (const double x : {-1.7, -1.0, 0.0, 0.4, 1.72}) {
      const double u = (1.0 + x / std::sqrt(3.0)) / 2.0;
      CHECK_THAT(catalog::cdf(d, x), WithinRel(boost::math::ibeta(2.5, 2.5, u), 1e-12));
      CHECK_THAT(catalog::cdf(d, x), WithinAbs(boost_mass(d, -std::sqrt(3.0), x), 1e-12));
    }
  }
  {
    const auto d = parse_spec("pareto:a=2,b=1");
    for (const double x : {1.0 + 1e-9, 1.5, 10.0, 1e6}) {
      CHECK_THAT(catalog::sf(d, x), WithinRel(std::pow(1.0 / x, 2.0), 1e-14));
      CHECK_THAT(catalog::cdf(d, x), WithinAbs(1.0 - std::pow(1.0 / x, 2.0), 1e-15));
    }
    CHECK(catalog::cdf(d, 0.5) == 0.0);
    CHECK(catalog::pdf(d, 0.5) == 0.0);
  }
  {
    const auto d = parse_spec("tmix:r=1,delta=1.3");
    const boost::math::students_t_distribution<double> ref(1.0);
    for (const double x : {-40.0, -1.0, 0.0, 2.0, 300.0}) {
      const double expected =
          0.5 * (boost::math::cdf(ref, x - 1.3) + boost::math::cdf(ref, x + 1.3));
      CHECK_THAT(catalog::cdf(d, x), WithinRel(expected, 1e-12));
    }
  }
  {
    const auto d = parse_spec("normmix:delta=1");
    const boost::math::normal_distribution<double> ref;
    for (const double x : {-9.0, -1.0, 0.0, 2.0, 12.0}) {
      const double expected = 0.5 * (boost::math::cdf(boost::math::complement(ref, x - 1.0)) +
                                     boost::math::cdf(boost::math::complement(ref, x + 1.0)));
      CHECK_THAT(catalog::sf(d, x), WithinRel(expected, 1e-12));
    }
  }
}

TEST_CASE("cdf is monotone with limits 0 and 1 and sf complements it", "[cdf]") {
  for (const char* spec : kSpecs) {
    INFO(spec);
    const auto d = parse_spec(spec);
    double prev = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double x = catalog::quantile(d, i / 400.0);
      const double F = catalog::cdf(d, x);
      CHECK(F >= prev);
      CHECK_THAT(F + catalog::sf(d, x), WithinAbs(1.0, 1e-15));
      prev = F;
    }
    const auto supp = catalog::support(d);
    const double far_lo = std::isfinite(supp.lo) ? supp.lo : -1e300;
    const double far_hi = std::isfinite(supp.hi) ? supp.hi : 1e300;
    CHECK_THAT(catalog::cdf(d, far_lo), WithinAbs(0.0, 1e-12));
    CHECK_THAT(catalog::cdf(d, far_hi), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("analytic derivatives match finite differences", "[pdf]") {
  for (const char* spec : kSpecs) {
    const auto d = parse_spec(spec);
    for (const double p : {0.01, 0.1, 0.37, 0.5, 0.8, 0.99}) {
      const double x = catalog::quantile(d, p);
      INFO(spec << " x=" << x);
      const double fd =
          numerics::central_difference([&](double t) { return catalog::pdf(d, t); }, x, 1e-2);
      const double scale = std::max(std::abs(fd), catalog::pdf(d, x) / std::max(1.0, std::abs(x)));
      CHECK_THAT(catalog::pdf_deriv(d, x), WithinAbs(fd, 1e-6 * scale + 1e-300));
    }
  }
}

TEST_CASE("non-differentiable points are reported", "[pdf]") {
  try {
    catalog::pdf_deriv(parse_spec("pareto:a=2,b=1"), 1.0);
    FAIL("expected NonDifferentiableError");
  } catch (const NonDifferentiableError& e) {
    CHECK(e.x() == 1.0);
  }
  CHECK_THROWS_AS(catalog::pdf_deriv(parse_spec("uniform"), 0.0), NonDifferentiableError);
  CHECK_THROWS_AS(catalog::pdf_deriv(parse_spec("uniform"), 1.0), NonDifferentiableError);
  CHECK(catalog::pdf_deriv(parse_spec("uniform"), 0.3) == 0.0);
}

TEST_CASE("spherical power density vanishes at its endpoints", "[pdf]") {
  for (const double r : {0.5, 1.0, 4.0}) {
    const auto d = parse_spec("gpow:r=" + std::to_string(r));
    CHECK(catalog::pdf(d, std::sqrt(r)) == 0.0);
    CHECK(catalog::pdf(d, -std::sqrt(r)) == 0.0);
  }
}

TEST_CASE("quantile inverts the cdf", "[quantile]") {
  for (const char* spec : kSpecs) {
    const auto d = parse_spec(spec);
    for (const double p : {1e-8, 1e-4, 0.01, 0.25, 0.5, 0.75, 0.99, 1 - 1e-4}) {
      INFO(spec << " p=" << p);
      CHECK_THAT(catalog::cdf(d, catalog::quantile(d, p)), WithinAbs(p, 1e-10));
    }
    for (const double q : {1e-12, 1e-8, 0.3}) {
      INFO(spec << " q=" << q);
      // Abscissa spacing bounds what any inverse can achieve.
      const double x = catalog::quantile_upper(d, q);
      const double resolution = 4.0 * catalog::pdf(d, x) * std::numeric_limits<double>::epsilon() *
                                std::max(1.0, std::abs(x));
      CHECK_THAT(catalog::sf(d, x), WithinAbs(q, 1e-8 * q + resolution));
    }
  }
  CHECK_THROWS_AS(catalog::quantile(parse_spec("normal"), 0.0), DomainError);
  CHECK_THROWS_AS(catalog::quantile(parse_spec("normal"), 1.0), DomainError);
}

TEST_CASE("maximal known concavity indices", "[metadata]") {
  CHECK_THAT(*catalog::max_known_s(parse_spec("t:r=4")), WithinRel(-0.2, 1e-15));
  CHECK_THAT(*catalog::max_known_s(parse_spec("t:r=1")), WithinRel(-0.5, 1e-15));
  CHECK_THAT(*catalog::max_known_s(parse_spec("gpow:r=4")), WithinRel(0.5, 1e-15));
  CHECK_THAT(*catalog::max_known_s(parse_spec("pareto:a=2,b=1")), WithinRel(-1.0 / 3.0, 1e-15));
  CHECK_THAT(*catalog::max_known_s(parse_spec("fdist:a=4,b=6")), WithinRel(-1.0 / 3.0, 1e-15));
  CHECK_FALSE(catalog::max_known_s(parse_spec("fdist:a=1,b=6")).has_value());
  CHECK(*catalog::max_known_s(parse_spec("normal")) == 0.0);
  CHECK(*catalog::max_known_s(parse_spec("uniform")) == kInf);
  CHECK_FALSE(catalog::max_known_s(parse_spec("normmix:delta=1")).has_value());
  CHECK_FALSE(catalog::max_known_s(parse_spec("tmix:r=1,delta=1")).has_value());
}

TEST_CASE("supports", "[metadata]") {
  const auto t = catalog::support(parse_spec("t:r=1"));
  CHECK(t.lo == -kInf);
  CHECK(t.hi == kInf);
  const auto p = catalog::support(parse_spec("pareto:a=2,b=3"));
  CHECK(p.lo == 3.0);
  CHECK(p.hi == kInf);
  const auto g = catalog::support(parse_spec("gpow:r=4"));
  CHECK(g.lo == -2.0);
  CHECK(g.hi == 2.0);
  const auto f = catalog::support(parse_spec("fdist:a=4,b=6"));
  CHECK(f.lo == 0.0);
  CHECK(f.hi == kInf);
}

TEST_CASE("symmetric members have mirrored densities", "[metadata]") {
  for (const char* spec : {"t:r=1", "gpow:r=3", "normmix:delta=1.3", "tmix:r=1,delta=2"}) {
    const auto d = parse_spec(spec);
    CHECK(catalog::is_symmetric(d));
    for (const double x : {0.1, 0.9, 1.6}) {
      CHECK_THAT(catalog::pdf(d, -x), WithinRel(catalog::pdf(d, x), 1e-14));
      CHECK_THAT(catalog::cdf(d, -x), WithinRel(catalog::sf(d, x), 1e-13));
    }
  }
  CHECK_FALSE(catalog::is_symmetric(parse_spec("pareto:a=2,b=1")));
}

#include "doctest.h"

#include <cmath>

#include "superhedge/config.hpp"
#include "superhedge/levy_model.hpp"

using namespace superhedge;
using namespace superhedge::levy;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

}  // namespace

TEST_CASE("truncation function") {
  const TruncationFunction h(1.0);
  CHECK(h(0.0) == 0.0);
  CHECK(h(0.7) == 0.7);
  CHECK(h(-1.0) == -1.0);
  CHECK(h(1.5) == 0.0);
  CHECK(h(-3.0) == 0.0);
  Vector v(2);
  v << 0.6, 0.9;  // norm > 1: the whole vector is cut
  CHECK(h(v).isZero());
  CHECK_THROWS_AS(TruncationFunction(0.0), ValidationError);
}

TEST_CASE("levy measure validation") {
  CHECK_THROWS_AS(LevyMeasure::dirac(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(LevyMeasure::dirac(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(LevyMeasure::dirac(1.0, -2.0), ValidationError);
  CHECK_THROWS_AS(LevyMeasure::dirac(1.0, std::nan("")), ValidationError);
  CHECK(LevyMeasure(1).empty());
  CHECK(LevyMeasure::dirac(2.0, 3.0).total_mass() == 3.0);
}

TEST_CASE("is_integrable_jumps examples") {
  auto zero = is_integrable_jumps(LevyMeasure(1));
  CHECK(zero.integrable);
  CHECK(zero.integral == 0.0);

  auto one = is_integrable_jumps(LevyMeasure::dirac(2.0, 3.0));
  CHECK(one.integrable);
  CHECK(one.integral == doctest::Approx(6.0).epsilon(1e-15));

  LevyMeasure two(1, {{Vector::Constant(1, 0.5), 1.0}, {Vector::Constant(1, -0.25), 4.0}});
  auto r = is_integrable_jumps(two);
  CHECK(r.integrable);
  CHECK(r.integral == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("drift_completion examples") {
  const TruncationFunction h(1.0);
  const double lambda = 0.7;
  CHECK(drift_completion(LevyMeasure(1), h).isZero());
  CHECK(drift_completion(LevyMeasure::dirac(0.5, lambda), h)(0) == 0.0);
  CHECK(drift_completion(LevyMeasure::dirac(2.0, lambda), h)(0) == -2.0 * lambda);
}

TEST_CASE("has_dominating_diffusion examples") {
  CHECK(has_dominating_diffusion(scalar(1.0), LevyMeasure::dirac(1.0, 1.0)));
  CHECK_FALSE(has_dominating_diffusion(scalar(0.0), LevyMeasure::dirac(1.0, 1.0)));
  CHECK(has_dominating_diffusion(scalar(0.0), LevyMeasure(1)));

  Matrix singular(2, 2);
  singular << 1.0, 0.0, 0.0, 0.0;
  Vector z(2);
  z << 0.1, 0.2;
  CHECK(has_dominating_diffusion(singular, LevyMeasure(2)));
  CHECK_FALSE(has_dominating_diffusion(singular, LevyMeasure::dirac(z, 1.0)));
  CHECK(has_dominating_diffusion(Matrix::Identity(2, 2), LevyMeasure::dirac(z, 1.0)));
}

TEST_CASE("build_theta examples") {
  const TruncationFunction h(1.0);
  const double lambda = 0.4;

  auto bm = build_theta({{scalar(1.0), LevyMeasure(1)}}, h);
  REQUIRE(bm.size() == 1);
  CHECK(bm.derived_triplets[0].b(0) == 0.0);
  CHECK(bm.derived_triplets[0].c(0, 0) == 1.0);
  CHECK(bm.derived_triplets[0].F.empty());

  auto jd = build_theta({{scalar(1.0), LevyMeasure::dirac(2.0, lambda)}}, h);
  CHECK(jd.derived_triplets[0].b(0) == -2.0 * lambda);
  CHECK(jd.derived_triplets[0].F.atoms()[0].mass == lambda);

  try {
    build_theta({{scalar(1.0), LevyMeasure(1)}, {scalar(0.0), LevyMeasure::dirac(1.0, 1.0)}}, h);
    FAIL("expected a ConditionError");
  } catch (const ConditionError& e) {
    CHECK(e.index() == 1);
    CHECK(e.condition() == Condition::kDominatingDiffusion);
    CHECK(std::string(e.what()).find("dominating diffusion") != std::string::npos);
  }

  BuildOptions lax;
  lax.strict = false;
  CHECK_NOTHROW(build_theta({{scalar(0.0), LevyMeasure::dirac(1.0, 1.0)}}, h, lax));

  // Atoms at or below -1 would make the exponential non-positive.
  CHECK_THROWS_AS(build_theta({{scalar(1.0), LevyMeasure::dirac(-1.0, 1.0)}}, h), ConditionError);
  CHECK_THROWS_AS(build_theta({{scalar(-1.0), LevyMeasure(1)}}, h), ConditionError);
}

TEST_CASE("build_theta is idempotent") {
  const TruncationFunction h(0.8);
  std::vector<PrimeElement> prime{{scalar(0.04), LevyMeasure::dirac(-0.5, 0.3)},
                                  {scalar(0.09), LevyMeasure(1, {{Vector::Constant(1, 1.7), 0.2},
                                                                 {Vector::Constant(1, -0.3), 1.1}})}};
  auto first = build_theta(prime, h);
  std::vector<PrimeElement> again;
  for (const auto& t : first.derived_triplets) again.push_back({t.c, t.F});
  auto second = build_theta(again, h);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first.derived_triplets[i].b(0) == second.derived_triplets[i].b(0));
  }
}

TEST_CASE("truncation radius only moves the drift") {
  LevyMeasure F(1, {{Vector::Constant(1, -0.5), 0.6}, {Vector::Constant(1, 0.8), 0.3},
                    {Vector::Constant(1, 2.5), 0.1}});
  const TruncationFunction h1(1.0), h2(0.5);
  auto t1 = build_theta({{scalar(0.04), F}}, h1).derived_triplets[0];
  auto t2 = build_theta({{scalar(0.04), F}}, h2).derived_triplets[0];
  CHECK(t1.c == t2.c);
  double expected = 0.0;
  for (const auto& a : F.atoms()) expected += a.mass * (h1(a.location(0)) - h2(a.location(0)));
  CHECK(t1.b(0) - t2.b(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("saturation examples") {
  const TruncationFunction h(1.0);
  const auto densities = default_densities();

  SUBCASE("pure diffusion passes trivially") {
    auto theta = build_theta({{scalar(0.04), LevyMeasure(1)}, {scalar(0.09), LevyMeasure(1)}}, h);
    auto r = check_saturation(theta, densities);
    CHECK(r.passed);
    CHECK(r.checks == 0);
  }
  SUBCASE("intensity-scaling family passes") {
    BuildOptions opt;
    opt.membership = [](const Matrix& c, const LevyMeasure& F) {
      return c.rows() == 1 && c(0, 0) == 1.0 && F.atoms().size() == 1 && F.atoms()[0].location(0) == 1.0 &&
             F.atoms()[0].mass > 0.0;
    };
    auto theta = build_theta({{scalar(1.0), LevyMeasure::dirac(1.0, 0.5)},
                              {scalar(1.0), LevyMeasure::dirac(1.0, 3.0)}}, h, opt);
    auto r = check_saturation(theta, {{"const 2", [](const Vector&) { return 2.0; }}});
    CHECK(r.passed);
    CHECK(check_saturation(theta, densities).passed);
  }
  SUBCASE("Poisson singleton fails") {
    BuildOptions lax;
    lax.strict = false;
    auto theta = build_theta({{scalar(0.0), LevyMeasure::dirac(1.0, 1.0)}}, h, lax);
    auto r = check_saturation(theta, {{"const 2", [](const Vector&) { return 2.0; }}});
    CHECK_FALSE(r.passed);
    REQUIRE(r.failing_element.has_value());
    CHECK(*r.failing_element == 0);
    CHECK(*r.failing_density == "const 2");
  }
  SUBCASE("non-positive density rejected") {
    auto theta = build_theta({{scalar(1.0), LevyMeasure::dirac(1.0, 1.0)}}, h);
    CHECK_THROWS_AS(check_saturation(theta, {{"zero", [](const Vector&) { return 0.0; }}}), ValidationError);
  }
}

TEST_CASE("config family membership") {
  auto cfg = config::parse_config(nlohmann::json::parse(R"({
    "model": {"family": {"sigma": {"min": 0.15, "max": 0.3, "steps": 4},
                         "jumps": [{"at": -0.5, "mass": 1.0}],
                         "intensity": {"min": 0.0, "max": 1.0, "steps": 5}}}})"));
  const auto prime = config::prime_elements(cfg.model);
  CHECK(prime.size() == 20);
  CHECK(prime[0].F.empty());
  CHECK(prime[4].F.atoms()[0].mass == doctest::Approx(1.0));
  auto theta = config::build_model(cfg);
  auto r = check_saturation(theta, default_densities());
  CHECK_FALSE(r.passed);  // bounded intensities are not closed under ψ = 2

  cfg.model.family->unbounded_intensity = true;
  auto open = config::build_model(cfg);
  CHECK(check_saturation(open, default_densities()).passed);
}

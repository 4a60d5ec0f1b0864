// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "superhedge/config.hpp"
#include "superhedge/parallel.hpp"
#include "superhedge/verification.hpp"

using namespace superhedge;
using levy::LevyMeasure;
using levy::Matrix;
using levy::Vector;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 20261017;
constexpr std::size_t kSteps = 256;
constexpr std::size_t kNodes = 801;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// The two model suites, built the same way the CLI builds them.
config::RunConfig suite_config(bool jumps, double radius = 1.0) {
  json model;
  if (jumps) {
    model = json::parse(R"({"family": {"sigma": {"min": 0.15, "max": 0.3, "steps": 4},
                                       "jumps": [{"at": -0.5, "mass": 1.0}],
                                       "intensity": {"min": 0.0, "max": 1.0, "steps": 5}}})");
  } else {
    model = json::parse(R"({"family": {"sigma": {"min": 0.1, "max": 0.3, "steps": 5}}})");
  }
  model["truncation_radius"] = radius;
  return config::parse_config({{"model", model},
                               {"numerics", {{"steps", kSteps}, {"nodes", kNodes}}},
                               {"payoff", {{"kind", "call"}, {"strike", 1.0}}}});
}

struct Suite {
  std::string label;
  levy::UncertaintySet theta;
  pricer::Payoff f = pricer::Payoff::call(1.0);
  paths::TimeGrid grid{1.0, kSteps};
  pricer::Lattice lattice;
  pricer::PriceResult priced;

  explicit Suite(bool jumps, double radius = 1.0)
      : label(jumps ? "jump" : "diffusion"),
        theta(config::build_model(suite_config(jumps, radius))),
        lattice(pricer::Lattice::for_model(theta, grid, config::lattice_options(suite_config(jumps, radius)))),
        priced(pricer::price(f, theta, lattice)) {}

  std::vector<verify::NamedPolicy> menu() const {
    auto m = verify::constant_policies(theta);
    m.push_back(verify::adversarial_policy(priced.vf, lattice));
    return m;
  }
};

// 1 -------------------------------------------------------------------------
Outcome validators() {
  const levy::TruncationFunction h(1.0);
  const double lambda = 0.7;
  std::vector<std::string> bad;
  int checks = 0;
  auto expect = [&](bool ok, const char* what) {
    ++checks;
    if (!ok) bad.emplace_back(what);
  };

  expect(levy::has_dominating_diffusion(scalar(1.0), LevyMeasure::dirac(1.0, 1.0)), "dd(1, δ1)");
  expect(!levy::has_dominating_diffusion(scalar(0.0), LevyMeasure::dirac(1.0, 1.0)), "dd(0, δ1)");
  expect(levy::has_dominating_diffusion(scalar(0.0), LevyMeasure(1)), "dd(0, 0)");

  expect(levy::drift_completion(LevyMeasure(1), h)(0) == 0.0, "b(0)");
  expect(levy::drift_completion(LevyMeasure::dirac(0.5, lambda), h)(0) == 0.0, "b(λδ0.5)");
  expect(levy::drift_completion(LevyMeasure::dirac(2.0, lambda), h)(0) == -2.0 * lambda, "b(λδ2)");

  const auto densities = levy::default_densities();
  const std::vector<levy::NamedDensity> two{{"psi=2", [](const Vector&) { return 2.0; }}};
  {
    auto theta = levy::build_theta({{scalar(0.04), LevyMeasure(1)}}, h);
    expect(levy::check_saturation(theta, densities).passed, "saturation: diffusion");
  }
  {
    levy::BuildOptions opt;
    opt.membership = [](const Matrix& c, const LevyMeasure& F) {
      return c.rows() == 1 && c(0, 0) == 1.0 && F.atoms().size() == 1 && F.atoms()[0].location(0) == 1.0 &&
             F.atoms()[0].mass > 0.0;
    };
    auto theta = levy::build_theta({{scalar(1.0), LevyMeasure::dirac(1.0, 0.5)}}, h, opt);
    expect(levy::check_saturation(theta, two).passed, "saturation: intensity family");
  }
  {
    levy::BuildOptions lax;
    lax.strict = false;
    auto theta = levy::build_theta({{scalar(0.0), LevyMeasure::dirac(1.0, 1.0)}}, h, lax);
    const auto r = levy::check_saturation(theta, two);
    expect(!r.passed && r.failing_element == 0u, "saturation: Poisson singleton");
  }
  try {
    levy::build_theta({{scalar(0.0), LevyMeasure::dirac(1.0, 1.0)}}, h);
    expect(false, "strict build accepted c = 0 with jumps");
  } catch (const levy::ConditionError& e) {
    expect(e.condition() == levy::Condition::kDominatingDiffusion, "strict build condition");
  }

  std::string detail = std::to_string(checks) + " checks";
  for (const auto& b : bad) detail += "; mismatch " + b;
  return {bad.empty(), detail};
}

// 2 -------------------------------------------------------------------------
Outcome martingale() {
  const levy::TruncationFunction h(1.0);
  Matrix c2(2, 2);
  c2 << 0.04, 0.012, 0.012, 0.09;
  struct Model {
    const char* name;
    levy::UncertaintySet theta;
  };
  std::vector<Model> models{
      {"brownian", levy::build_theta({{scalar(1.0), LevyMeasure(1)}}, h)},
      {"brownian+jump", levy::build_theta({{scalar(1.0), LevyMeasure::dirac(2.0, 0.5)}}, h)},
      {"2d rank-2", levy::build_theta({{c2, LevyMeasure(2)}}, h)},
  };
  const paths::TimeGrid grid(1.0, 64);
  const std::size_t m = 100000;
  bool ok = true;
  std::string detail;
  for (const auto& model : models) {
    const std::size_t d = model.theta.dimension();
    const paths::PathSimulator sim(model.theta, grid);
    std::vector<double> xt(m * d);
    parallel_for(m, [&](std::size_t i) {
      const auto p = sim.simulate(paths::constant_policy(0), kSeed, i);
      for (std::size_t j = 0; j < d; ++j) xt[i * d + j] = p.x[grid.steps() * d + j];
    });
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += xt[i * d + j];
      mean /= static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) ss += std::pow(xt[i * d + j] - mean, 2);
      const double se = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
      const double z = mean / se;
      ok = ok && std::abs(z) <= 4.0;
      detail += fmt("%s%s[%zu] z=%.2f", detail.empty() ? "" : ", ", model.name, j, z);
    }
  }
  return {ok, detail};
}

// 3 -------------------------------------------------------------------------
Outcome penrose() {
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> dim(1, 4);
  double worst = 0.0;
  std::size_t deficient = 0;
  auto rel = [](const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
  };
  for (int t = 0; t < 1000; ++t) {
    const int d = dim(rng);
    const int rank = std::uniform_int_distribution<int>(0, d)(rng);
    if (rank < d) ++deficient;
    Matrix g(d, std::max(rank, 1));
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) g(i, j) = rank == 0 ? 0.0 : n(rng);
    const Matrix a = g * g.transpose();
    const Matrix p = decomp::pseudoinverse(a);
    if (a.isZero()) {
      worst = std::max(worst, p.norm());
      continue;
    }
    worst = std::max({worst, rel(a * p * a, a), rel(p * a * p, p), rel((a * p).transpose(), a * p),
                      rel((p * a).transpose(), p * a)});
  }
  return {worst <= 1e-9, fmt("max relative defect %.2e, %zu rank-deficient", worst, deficient)};
}

// 4 -------------------------------------------------------------------------
Outcome dpp() {
  double worst = 0.0;
  std::string detail;
  for (bool jumps : {false, true}) {
    const Suite s(jumps);
    const double d = pricer::dpp_check(s.priced.vf, 0, kSteps / 2, s.theta, s.lattice);
    worst = std::max(worst, d);
    detail += fmt("%s%s defect %.2e", detail.empty() ? "" : ", ", s.label.c_str(), d);
  }
  return {worst <= 1e-12, detail};
}

// 5 -------------------------------------------------------------------------
Outcome complete_market() {
  const double sigma = 0.2;
  const auto theta = levy::build_theta({{scalar(sigma * sigma), LevyMeasure(1)}}, levy::TruncationFunction(1.0));
  const paths::TimeGrid grid(1.0, kSteps);
  pricer::LatticeOptions lo;
  lo.nodes = kNodes;
  const auto lat = pricer::Lattice::for_model(theta, grid, lo);
  const auto pr = pricer::price(pricer::Payoff::call(1.0), theta, lat);
  const double crr = oracle::crr_call(1.0, 1.0, sigma, 1.0, 20000);
  const double price_rel = std::abs(pr.price - crr) / crr;

  const auto fields = decomp::analytic_characteristics(pr.vf, lat, theta);
  std::vector<Vector> sy;
  std::vector<Matrix> cs;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    sy.push_back(Vector::Constant(1, fields.cSY_at(0)[i]));
    cs.push_back(Matrix::Constant(1, 1, fields.cS_at(0)[i]));
  }
  const auto H = decomp::hedge_ratio(sy, cs, Provenance::kAnalytic);
  const auto v = pr.vf.values(0);
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 1; i + 1 < lat.size(); ++i) {
    const double fd = (v[i + 1] - v[i - 1]) / (std::exp(lat.node(i + 1)) - std::exp(lat.node(i - 1)));
    if (std::abs(fd) < 1e-12) continue;  // relative error undefined where the delta vanishes
    worst = std::max(worst, std::abs(H.h[i] - fd) / std::abs(fd));
    ++checked;
  }
  return {price_rel <= 2e-3 && worst <= 1e-2,
          fmt("price %.6f vs CRR %.6f (rel %.2e); delta rel err max %.2e over %zu nodes", pr.price, crr, price_rel,
              worst, checked)};
}

// 6 -------------------------------------------------------------------------
Outcome duality() {
  bool ok = true;
  std::string detail;
  for (bool jumps : {false, true}) {
    const Suite s(jumps);
    const auto menu = s.menu();
    const auto g = verify::duality_gap(s.priced.price, s.f, s.theta, s.grid, menu, 100000, kSeed);
    const double rel = std::abs(g.gap) / g.upper;
    const double cap = jumps ? 0.02 : 0.005;
    ok = ok && g.weak_duality && rel <= cap;
    detail += fmt("%s%s: price %.6f best %s %.6f (se %.1e) gap %+.3f%% cap %.1f%% weak %s", detail.empty() ? "" : "; ",
                  s.label.c_str(), g.upper, g.best_policy.c_str(), g.lower, g.lower_std_error, 100.0 * g.gap / g.upper,
                  100.0 * cap, g.weak_duality ? "ok" : "VIOLATED");
  }
  return {ok, detail};
}

// 7 -------------------------------------------------------------------------
Outcome superhedging() {
  bool ok = true;
  std::string detail;
  for (bool jumps : {false, true}) {
    const Suite s(jumps);
    const auto menu = s.menu();
    const auto fields = decomp::analytic_characteristics(s.priced.vf, s.lattice, s.theta);
    const verify::StrategyRule rule = [&](const paths::PricePath& p) {
      return decomp::analytic_strategy(fields, s.lattice, p);
    };
    const std::size_t m = 10000;
    const auto rep = verify::superhedge_test(s.priced.price, rule, s.f, s.theta, menu, m, s.grid, kSeed);
    double worst_fail = 0.0;
    for (const auto& p : rep.policies) worst_fail = std::max(worst_fail, p.fail_fraction);

    const paths::PathSimulator sim(s.theta, s.grid);
    double worst_p99 = 0.0;
    bool mono_ok = true;
    for (const auto& pol : menu) {
      std::vector<verify::HedgedPath> ens(m);
      parallel_for(m, [&](std::size_t i) {
        auto p = paths::stochastic_exponential(sim.simulate(pol.policy, kSeed, i));
        auto y = pricer::value_along_path(s.priced.vf, p, s.lattice);
        auto h = rule(p);
        ens[i] = {std::move(p), std::move(y.y), std::move(h)};
      });
      const auto mono = verify::monotonicity_test(ens, rep.eps_hedge);
      worst_p99 = std::max(worst_p99, mono.p99_positive);
      mono_ok = mono_ok && mono.passed;
    }
    ok = ok && rep.passed && mono_ok;
    detail += fmt("%s%s: eps %.5f, worst fail fraction %.4f over %zu policies, worst p99 %.5f", detail.empty() ? "" : "; ",
                  s.label.c_str(), rep.eps_hedge, worst_fail, menu.size(), worst_p99);
  }
  return {ok, detail};
}

// 8 -------------------------------------------------------------------------
Outcome routes() {
  auto cfg = suite_config(false);
  const auto theta = config::build_model(cfg);
  const decomp::EmpiricalOptions eo;
  const std::size_t m = 1000;
  std::vector<double> medians;
  for (std::size_t n : {1024UL, 4096UL, 16384UL}) {
    const paths::TimeGrid grid(1.0, n);
    const auto lat = pricer::Lattice::for_model(theta, grid, config::lattice_options(cfg));
    const auto pr = pricer::price(pricer::Payoff::call(1.0), theta, lat);
    const auto fields = decomp::analytic_characteristics(pr.vf, lat, theta);
    const auto pol = verify::adversarial_policy(pr.vf, lat);
    const paths::PathSimulator sim(theta, grid);
    std::vector<double> d(m);
    parallel_for(m, [&](std::size_t i) {
      const auto s = paths::stochastic_exponential(sim.simulate(pol.policy, kSeed, i));
      const auto y = pricer::value_along_path(pr.vf, s, lat);
      d[i] = decomp::route_difference(decomp::empirical_strategy(s, y.y, grid.dt(), eo),
                                      decomp::analytic_strategy(fields, lat, s), eo.lag);
    });
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(m / 2), d.end());
    medians.push_back(d[m / 2]);
  }
  const double r1 = medians[1] / medians[0], r2 = medians[2] / medians[1];
  auto halves = [](double r) { return r >= 0.4 && r <= 0.6; };
  return {halves(r1) && halves(r2), fmt("medians %.5f %.5f %.5f, ratios %.3f %.3f (band [0.4, 0.6])", medians[0],
                                        medians[1], medians[2], r1, r2)};
}

// 9 -------------------------------------------------------------------------
Outcome truncation() {
  bool ok = true;
  std::string detail;
  for (bool jumps : {false, true}) {
    const Suite a(jumps, 1.0);
    const Suite b(jumps, 0.5);
    const double rel = std::abs(a.priced.price - b.priced.price) / a.priced.price;
    ok = ok && rel <= 2e-3;
    detail += fmt("%s%s: %.8f vs %.8f (rel %.1e)", detail.empty() ? "" : "; ", a.label.c_str(), a.priced.price,
                  b.priced.price, rel);
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "validator suite", 1.0, validators},
      {2, "martingale compensation", 30.0, martingale},
      {3, "pseudoinverse axioms", 5.0, penrose},
      {4, "dynamic programming semigroup", 10.0, dpp},
      {5, "complete-market reduction", 20.0, complete_market},
      {6, "robust duality gap", 300.0, duality},
      {7, "superhedging check", 300.0, superhedging},
      {8, "route consistency", 180.0, routes},
      {9, "truncation invariance", 300.0, truncation},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.passed && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

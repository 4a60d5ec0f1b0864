#include "superhedge/verification.hpp"

#include <algorithm>
#include <cmath>

#include "superhedge/parallel.hpp"

namespace superhedge::verify {

namespace {

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_and_se(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = x.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {m, std::sqrt(var / n)};
}

}  // namespace

double hedge_epsilon(const levy::UncertaintySet& theta, const paths::TimeGrid& grid,
                     const Tolerances& tol) {
  double c_max = 0.0;
  for (const auto& t : theta.derived_triplets) {
    Eigen::SelfAdjointEigenSolver<levy::Matrix> eig(t.c, Eigen::EigenvaluesOnly);
    c_max = std::max(c_max, eig.eigenvalues().maxCoeff());
  }
  return tol.c1 * std::sqrt(c_max) * std::sqrt(grid.dt());
}

std::vector<NamedPolicy> constant_policies(const levy::UncertaintySet& theta) {
  std::vector<NamedPolicy> out;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out.push_back({"const[" + std::to_string(i) + "]", paths::constant_policy(i)});
  }
  return out;
}

NamedPolicy adversarial_policy(const pricer::ValueFunction& vf, const pricer::Lattice& lattice) {
  return {"argmax", pricer::argmax_policy(vf, lattice)};
}

SuperhedgeReport superhedge_test(double x0, const StrategyRule& hedge, const pricer::Payoff& f,
                                 const levy::UncertaintySet& theta,
                                 std::span<const NamedPolicy> policies, std::size_t paths_per_policy,
                                 const paths::TimeGrid& grid, std::uint64_t seed,
                                 const Tolerances& tol) {
  SuperhedgeReport report;
  report.x0 = x0;
  report.eps_hedge = hedge_epsilon(theta, grid, tol);
  report.tolerances = tol;
  report.seed = seed;
  report.paths_per_policy = paths_per_policy;
  report.passed = true;

  const paths::PathSimulator sim(theta, grid);
  for (const auto& pol : policies) {
    PolicyShortfall ps;
    ps.name = pol.name;
    ps.paths = paths_per_policy;
    ps.shortfalls.resize(paths_per_policy);
    std::vector<double> surplus(paths_per_policy);
    parallel_for(paths_per_policy, [&](std::size_t i) {
      const auto x = sim.simulate(pol.policy, seed, i);
      const auto s = paths::stochastic_exponential(x);
      const auto h = hedge(s);
      const auto gains = paths::stochastic_integral(h, s);
      const double wealth = x0 + gains.back();
      const double payoff = f(s.s.back());
      surplus[i] = wealth - payoff;
      ps.shortfalls[i] = std::max(payoff - wealth, 0.0);
    });
    for (double v : ps.shortfalls) {
      ps.max_shortfall = std::max(ps.max_shortfall, v);
      if (v > report.eps_hedge) ++ps.failures;
    }
    ps.fail_fraction = paths_per_policy == 0
                           ? 0.0
                           : static_cast<double>(ps.failures) / static_cast<double>(paths_per_policy);
    ps.mean_surplus = mean_and_se(surplus).mean;
    ps.passed = ps.fail_fraction <= tol.fail_quota && ps.max_shortfall <= tol.shortfall_cap;
    report.passed = report.passed && ps.passed;
    report.policies.push_back(std::move(ps));
  }
  return report;
}

MonotonicityReport monotonicity_test(std::span<const HedgedPath> ensemble, double eps_mono) {
  MonotonicityReport r;
  r.paths = ensemble.size();
  r.eps_mono = eps_mono;
  if (ensemble.empty()) {
    r.passed = true;
    return r;
  }
  const std::size_t n = ensemble.front().y.size() - 1;
  std::vector<double> positive;
  std::vector<double> terminal_k;
  std::vector<std::vector<double>> y_inc(n);
  for (const auto& p : ensemble) {
    if (p.y.size() != n + 1 || p.s.steps() != n || p.h.steps() != n) {
      throw ValidationError("monotonicity_test: ensemble paths are not aligned");
    }
    const auto gains = paths::stochastic_integral(p.h, p.s);
    for (std::size_t k = 0; k < n; ++k) {
      const double dy = p.y[k + 1] - p.y[k];
      const double inc = dy - (gains[k + 1] - gains[k]);
      ++r.increments;
      if (inc > 0.0) positive.push_back(inc);
      if (inc > eps_mono) ++r.exceeding;
      y_inc[k].push_back(dy);
    }
    terminal_k.push_back(p.y.front() - p.y.back() + gains.back());
  }
  r.positive_increments = positive.size();
  if (!positive.empty()) {
    r.max_positive = *std::max_element(positive.begin(), positive.end());
    const auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(positive.size()))) - 1;
    std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(idx), positive.end());
    r.p99_positive = positive[idx];
  }
  const auto tk = mean_and_se(terminal_k);
  r.mean_terminal_k = tk.mean;
  r.se_terminal_k = tk.se;
  r.worst_mean_increment_excess = -std::numeric_limits<double>::infinity();
  for (const auto& inc : y_inc) {
    const auto ms = mean_and_se(inc);
    r.worst_mean_increment_excess = std::max(r.worst_mean_increment_excess, ms.mean - 3.0 * ms.se);
  }
  r.passed = r.p99_positive <= eps_mono;
  return r;
}

PolicyMean policy_mean(const pricer::Payoff& f, const paths::PathSimulator& sim,
                       const NamedPolicy& policy, std::size_t paths, std::uint64_t seed) {
  std::vector<double> values(paths);
  parallel_for(paths, [&](std::size_t i) {
    const auto x = sim.simulate(policy.policy, seed, i);
    const auto s = paths::stochastic_exponential(x);
    values[i] = f(s.s.back());
  });
  const auto ms = mean_and_se(values);
  return {policy.name, ms.mean, ms.se};
}

GapReport duality_gap(double upper, const pricer::Payoff& f, const levy::UncertaintySet& theta,
                      const paths::TimeGrid& grid, std::span<const NamedPolicy> policies,
                      std::size_t paths, std::uint64_t seed, const Tolerances& tol) {
  if (policies.empty()) throw ValidationError("duality_gap needs at least one policy");
  GapReport r;
  r.upper = upper;
  r.seed = seed;
  r.paths = paths;
  r.weak_duality = true;
  const paths::PathSimulator sim(theta, grid);
  const double slack = tol.scheme_rel * std::abs(upper) + 1e-12;
  bool first = true;
  for (const auto& p : policies) {
    auto pm = policy_mean(f, sim, p, paths, seed);
    if (pm.mean - upper > 3.0 * pm.std_error + slack) r.weak_duality = false;
    if (first || pm.mean > r.lower) {
      r.lower = pm.mean;
      r.lower_std_error = pm.std_error;
      r.best_policy = pm.name;
      first = false;
    }
    r.policies.push_back(std::move(pm));
  }
  r.gap = r.upper - r.lower;
  return r;
}

GapReport duality_gap(const pricer::Payoff& f, const levy::UncertaintySet& theta,
                      const pricer::Lattice& lattice, std::size_t paths, std::uint64_t seed,
                      const Tolerances& tol) {
  const auto priced = pricer::price(f, theta, lattice);
  auto menu = constant_policies(theta);
  menu.push_back(adversarial_policy(priced.vf, lattice));
  return duality_gap(priced.price, f, theta, lattice.grid(), menu, paths, seed, tol);
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  std::vector<HistogramBin> out;
  if (values.empty()) return out;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn;
  const double hi = *mx > lo ? *mx : lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.push_back({lo + width * static_cast<double>(b), lo + width * static_cast<double>(b + 1), 0});
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

}  // namespace superhedge::verify

#pragma once
// Monte-Carlo checks of the superhedging claims on a finite policy menu.
//
// The quasi-sure quantifier ("for every P in the set") is approximated by the
// policies passed in; results are reported per policy, never merged into a
// single quasi-sure verdict.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "superhedge/decomposition.hpp"
#include "superhedge/levy_model.hpp"
#include "superhedge/path_engine.hpp"
#include "superhedge/robust_pricer.hpp"

namespace superhedge::verify {

inline constexpr const char* kPolicyMenuNote =
    "quasi-sure statements are approximated by a finite policy menu; results are per policy";

struct Tolerances {
  /// ε_hedge = ε_mono = c1·σ_max·√dt·S_0 (S_0 = 1).
  double c1 = 5.0;
  double fail_quota = 0.01;
  /// Maximum admissible shortfall; unbounded unless configured.
  double shortfall_cap = std::numeric_limits<double>::infinity();
  /// Relative lattice tolerance allowed in weak-duality comparisons.
  double scheme_rel = 2e-3;
};

double hedge_epsilon(const levy::UncertaintySet& theta, const paths::TimeGrid& grid,
                     const Tolerances& tol);

struct NamedPolicy {
  std::string name;
  paths::Policy policy;
};

/// One constant policy per triplet, named "const[i]".
std::vector<NamedPolicy> constant_policies(const levy::UncertaintySet& theta);

/// Follows the pricer's argmax field ("adversarial").
NamedPolicy adversarial_policy(const pricer::ValueFunction& vf, const pricer::Lattice& lattice);

/// Produces the hedge for one simulated price path; must only use s[0..k]
/// for H[k].
using StrategyRule = std::function<Strategy(const paths::PricePath&)>;

struct PolicyShortfall {
  std::string name;
  std::size_t paths = 0;
  std::size_t failures = 0;
  double fail_fraction = 0.0;
  double max_shortfall = 0.0;
  double mean_surplus = 0.0;  // mean of x0 + (H•S)_T - f
  bool passed = false;
  std::vector<double> shortfalls;  // (f - x0 - (H•S)_T)^+ per path
};

struct SuperhedgeReport {
  double x0 = 0.0;
  double eps_hedge = 0.0;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::size_t paths_per_policy = 0;
  std::vector<PolicyShortfall> policies;
  bool passed = false;
};

/// Simulates M paths per policy (common random numbers across policies) and
/// records the shortfall of x0 + H•S against f(S_T).
SuperhedgeReport superhedge_test(double x0, const StrategyRule& hedge, const pricer::Payoff& f,
                                 const levy::UncertaintySet& theta,
                                 std::span<const NamedPolicy> policies, std::size_t paths_per_policy,
                                 const paths::TimeGrid& grid, std::uint64_t seed,
                                 const Tolerances& tol = {});

struct HedgedPath {
  paths::PricePath s;
  std::vector<double> y;
  Strategy h;
};

struct MonotonicityReport {
  std::size_t paths = 0;
  std::size_t increments = 0;
  std::size_t positive_increments = 0;
  std::size_t exceeding = 0;          // increments of Y - H•S above ε_mono
  double p99_positive = 0.0;          // 99th percentile of positive increments
  double max_positive = 0.0;
  double eps_mono = 0.0;
  double mean_terminal_k = 0.0;       // K_T = Y_0 - Y_T + (H•S)_T
  double se_terminal_k = 0.0;
  /// Largest over k of (mean(Y[k+1]-Y[k]) - 3·SE): positive means a
  /// supermartingale violation beyond the noise band.
  double worst_mean_increment_excess = 0.0;
  bool passed = false;
};

MonotonicityReport monotonicity_test(std::span<const HedgedPath> ensemble, double eps_mono);

struct PolicyMean {
  std::string name;
  double mean = 0.0;
  double std_error = 0.0;
};

struct GapReport {
  double upper = 0.0;
  double lower = 0.0;
  double lower_std_error = 0.0;
  std::string best_policy;
  double gap = 0.0;
  std::vector<PolicyMean> policies;
  /// Every policy mean <= upper + 3·SE + scheme tolerance.
  bool weak_duality = false;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
};

/// Monte-Carlo mean of f(S_T) under a policy.
PolicyMean policy_mean(const pricer::Payoff& f, const paths::PathSimulator& sim,
                       const NamedPolicy& policy, std::size_t paths, std::uint64_t seed);

/// upper = lattice price; lower = best policy mean over the menu.
GapReport duality_gap(double upper, const pricer::Payoff& f, const levy::UncertaintySet& theta,
                      const paths::TimeGrid& grid, std::span<const NamedPolicy> policies,
                      std::size_t paths, std::uint64_t seed, const Tolerances& tol = {});

/// Prices on `lattice`, then uses every constant policy plus the argmax policy.
GapReport duality_gap(const pricer::Payoff& f, const levy::UncertaintySet& theta,
                      const pricer::Lattice& lattice, std::size_t paths, std::uint64_t seed,
                      const Tolerances& tol = {});

struct HistogramBin {
  double lo;
  double hi;
  std::size_t count;
};

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins);

}  // namespace superhedge::verify

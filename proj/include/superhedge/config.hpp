#pragma once
// Run configuration: a JSON tree with model, numerics, payoff and run
// sections. Every field has a default; unknown keys are rejected.

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "superhedge/levy_model.hpp"
#include "superhedge/path_engine.hpp"
#include "superhedge/robust_pricer.hpp"

namespace superhedge::config {

struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 1;

  std::vector<double> points() const;
};

/// Parametric Θ': c = σ²·base_c, F = λ·Σ base atoms, over a (σ, λ) grid.
struct Family {
  Range sigma{0.2, 0.2, 1};
  levy::Matrix base_c;  // defaults to the identity
  std::vector<levy::JumpAtom> jumps;
  Range intensity{1.0, 1.0, 1};
  /// Membership accepts every λ > 0 (closed under intensity scaling).
  bool unbounded_intensity = false;
};

struct ModelSpec {
  int dimension = 1;
  double truncation_radius = 1.0;
  bool strict = true;
  std::vector<levy::PrimeElement> elements;
  std::optional<Family> family;
};

struct NumericsSpec {
  double horizon = 1.0;
  std::size_t steps = 256;
  std::size_t nodes = 801;
  double span_multiplier = 6.0;
  double cfl_limit = 0.9;
  std::size_t lag = 8;
  std::size_t window = 32;
  double threshold_alpha = 3.0;
  double threshold_beta = 0.4;
  double hedge_c1 = 5.0;
  double fail_quota = 0.01;
  double eig_tol = levy::kEigTol;
};

struct PayoffSpec {
  std::string kind = "call";
  double strike = 1.0;
  double cash = 1.0;
  double value = 0.0;
  std::vector<double> table_s;
  std::vector<double> table_g;
  std::optional<double> growth_bound;
};

struct RunSpec {
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t export_paths = 20;
  std::size_t hedge_paths = 200;
};

struct RunConfig {
  ModelSpec model;
  NumericsSpec numerics;
  PayoffSpec payoff;
  RunSpec run;
};

/// Throws ValidationError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Normalized tree with every default filled in (output_dir excluded).
nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64 of the normalized tree, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Builds Θ from the model section. `strict` overrides model.strict when set.
levy::UncertaintySet build_model(const RunConfig& cfg, std::optional<bool> strict = std::nullopt);

/// Θ' elements of the model section (explicit list or expanded family grid).
std::vector<levy::PrimeElement> prime_elements(const ModelSpec& model);

/// Membership oracle matching the model section.
levy::Membership model_membership(const ModelSpec& model);

pricer::Payoff build_payoff(const PayoffSpec& spec);

paths::TimeGrid time_grid(const RunConfig& cfg);

pricer::LatticeOptions lattice_options(const RunConfig& cfg);

}  // namespace superhedge::config

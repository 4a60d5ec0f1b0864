#pragma once
// Simulation of controlled Lévy paths on a uniform grid, the stochastic
// exponential S = E(X) and discrete left-endpoint stochastic integrals.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "superhedge/levy_model.hpp"
#include "superhedge/strategy.hpp"

namespace superhedge::paths {

class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  /// t_k = k·dt, with t_N = T exactly.
  double time(std::size_t k) const noexcept;

 private:
  double horizon_;
  std::size_t steps_;
};

/// Trajectory of X with the control used on each step and the realized jumps.
/// Step k runs from t_k to t_{k+1} and
///   x[k+1] - x[k] = drift[k] + diffusion[k] + Σ jumps of step k,
/// where drift[k] = (b - ∫h dF)·dt of the chosen triplet.
struct SamplePath {
  std::size_t dim = 1;
  std::vector<double> x;                   // (N+1) × dim
  std::vector<std::uint32_t> controls;     // N
  std::vector<double> drift;               // N × dim
  std::vector<double> diffusion;           // N × dim
  std::vector<std::size_t> jump_offsets;   // N+1; jumps of step k: [off[k], off[k+1])
  std::vector<double> jump_sizes;          // (#jumps) × dim

  std::size_t steps() const noexcept { return controls.size(); }
  std::span<const double> state(std::size_t k) const { return {x.data() + k * dim, dim}; }
  std::size_t jump_count(std::size_t k) const { return jump_offsets[k + 1] - jump_offsets[k]; }
  std::span<const double> jump(std::size_t j) const { return {jump_sizes.data() + j * dim, dim}; }
};

/// Positive price trajectory, s[0] = 1 componentwise.
struct PricePath {
  std::size_t dim = 1;
  std::vector<double> s;  // (N+1) × dim

  std::size_t steps() const noexcept { return s.size() / dim - 1; }
  std::span<const double> state(std::size_t k) const { return {s.data() + k * dim, dim}; }
};

struct PolicyContext {
  std::size_t step;
  double time;
  std::span<const double> x;  // X at t_k
  std::span<const double> s;  // S at t_k; NaN once the discrete exponential lost positivity
};

/// Markov control: maps (t_k, X_k, S_k) to an index into the triplet list.
using Policy = std::function<std::size_t(const PolicyContext&)>;

Policy constant_policy(std::size_t index);

/// Per-path random stream seed derived from (seed, path index); ensembles are
/// reproducible and independent of thread scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path_index) noexcept;

/// Simulator with per-triplet quantities (square-root covariance, compensated
/// drift, Poisson means) precomputed for one grid.
class PathSimulator {
 public:
  PathSimulator(const levy::UncertaintySet& theta, TimeGrid grid);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t triplet_count() const noexcept { return models_.size(); }

  SamplePath simulate(const Policy& policy, std::uint64_t seed,
                      std::uint64_t path_index = 0) const;

 private:
  struct StepModel {
    std::vector<double> drift;      // (b - ∫h dF)·dt
    std::vector<double> sqrt_cov;   // d×d row-major, (c·dt)^{1/2}
    std::vector<double> atom_means; // mass·dt
    std::vector<double> atom_locs;  // atoms × d
  };

  TimeGrid grid_;
  std::size_t dim_;
  std::vector<StepModel> models_;
};

/// Euler scheme under `policy`: Gaussian increment with covariance c·dt,
/// Poisson(mass·dt) jumps per atom applied after it, compensated drift.
SamplePath simulate(const levy::UncertaintySet& theta, const Policy& policy, const TimeGrid& grid,
                    std::uint64_t seed);

/// One step of the Doléans-Dade exponential for component `i`:
/// (1 + Δx^cont)·Π_j (1 + z_j). Equals 1 + Δx when the step has no jumps.
/// Throws NumericalError if the factor is not positive.
double step_factor(const SamplePath& path, std::size_t step, std::size_t i);

/// S with S_0 = 1 and s[k+1] = s[k]·step_factor(k).
PricePath stochastic_exponential(const SamplePath& path);

/// (H•S)[m] = Σ_{k<m} H[k]·(s[k+1] - s[k]), left endpoints only.
std::vector<double> stochastic_integral(const Strategy& H, const PricePath& s);

/// One ensemble entry as read back from a columnar file.
struct EnsembleRecord {
  std::size_t path_id = 0;
  std::vector<double> x;               // (N+1) × dim
  std::vector<double> s;               // (N+1) × dim
  std::vector<std::int64_t> controls;  // N+1, the last entry is -1
};

struct Ensemble {
  std::size_t dim = 1;
  std::size_t steps = 0;
  double horizon = 0.0;
  std::vector<EnsembleRecord> paths;
};

/// Columnar text: one header comment line, one column line
/// (path,t,X1..Xd,S1..Sd,control), then one row per (path, step).
void write_ensemble(std::ostream& out, const TimeGrid& grid, std::span<const SamplePath> xs,
                    std::span<const PricePath> ss);
Ensemble read_ensemble(std::istream& in);

}  // namespace superhedge::paths

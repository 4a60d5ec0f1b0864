#pragma once
// Backward dynamic programming for the sublinear expectation
//
//     E_t(f) = sup_{P ∈ P_Θ} E^P[f | F_t]
//
// on a one-dimensional log-price lattice. Each coarse time step applies, for
// every triplet θ in the grid, m explicit substeps of the Lévy generator
// (control held constant over the step) and keeps the nodewise maximum.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superhedge/levy_model.hpp"
#include "superhedge/path_engine.hpp"
#include "superhedge/simd/kernels.hpp"

namespace superhedge::pricer {

/// Terminal payoff g(S_T) with a linear growth bound |g(s)| <= K(1 + |s|).
class Payoff {
 public:
  enum class Kind { kCall, kPut, kDigital, kLinear, kConstant, kTabulated };

  static Payoff call(double strike);
  static Payoff put(double strike);
  static Payoff digital(double strike, double cash = 1.0);
  static Payoff linear();
  static Payoff constant(double value);
  /// Piecewise linear through (s_i, g_i), linear extrapolation beyond the ends.
  static Payoff tabulated(std::vector<double> s, std::vector<double> g);

  double operator()(double s) const;

  Kind kind() const noexcept { return kind_; }
  double strike() const noexcept { return strike_; }
  double growth_bound() const noexcept { return growth_; }
  Payoff with_growth_bound(double k) const;
  std::string describe() const;

 private:
  Payoff(Kind kind, double strike, double level) : kind_(kind), strike_(strike), level_(level) {}

  Kind kind_;
  double strike_ = 0.0;
  double level_ = 0.0;
  std::vector<double> table_s_;
  std::vector<double> table_g_;
  double growth_ = 1.0;
};

struct LatticeOptions {
  std::size_t nodes = 801;
  double span_multiplier = 6.0;
  double cfl_limit = 0.9;
  /// Overrides the span rule when set.
  std::optional<double> half_span;
};

/// Uniform lattice in log-price x = log S, paired with the coarse time grid
/// and the number of explicit substeps per coarse step.
class Lattice {
 public:
  Lattice(double x_min, double x_max, std::size_t nodes, paths::TimeGrid grid,
          std::size_t substeps = 1, double cfl_limit = 0.9);

  /// Span m·(σ_max√T + jump reach·expected count) around x = 0, odd node count
  /// so that x = 0 is a node, and the smallest substep count meeting the CFL
  /// limit for every triplet of theta.
  static Lattice for_model(const levy::UncertaintySet& theta, paths::TimeGrid grid,
                           LatticeOptions options = {});

  std::size_t size() const noexcept { return nodes_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_min_ + dx_ * static_cast<double>(nodes_ - 1); }
  double dx() const noexcept { return dx_; }
  double node(std::size_t i) const noexcept { return x_min_ + dx_ * static_cast<double>(i); }
  const paths::TimeGrid& grid() const noexcept { return grid_; }
  std::size_t substeps() const noexcept { return substeps_; }
  double substep_dt() const noexcept { return grid_.dt() / static_cast<double>(substeps_); }
  double cfl_limit() const noexcept { return cfl_limit_; }

  /// Same spatial nodes, different number of substeps.
  Lattice with_substeps(std::size_t m) const;

 private:
  double x_min_;
  double dx_;
  std::size_t nodes_;
  paths::TimeGrid grid_;
  std::size_t substeps_;
  double cfl_limit_;
};

/// Triplet of log S = log E(X) for a one-dimensional X-triplet: same c, atoms
/// moved to log(1+z), drift recompleted against the same truncation.
levy::LevyTriplet log_price_triplet(const levy::LevyTriplet& x_triplet,
                                    const levy::TruncationFunction& h);

std::vector<levy::LevyTriplet> log_price_triplets(const levy::UncertaintySet& theta);

/// One explicit substep v + dt·L^θ v of the generator
///   L^θ v = b v' + ½ c v'' + Σ mass·[v(x+z) - v(x) - v'(x) h(z)]
/// with central differences (upwind for the first-order term when central
/// weights would turn negative) and linear interpolation at x + z. Edge nodes
/// are held fixed; targets beyond the lattice are linearly extrapolated.
class StepOperator {
 public:
  /// Throws NumericalError when the CFL bound is violated.
  StepOperator(const levy::LevyTriplet& triplet, const levy::TruncationFunction& h,
               const Lattice& lattice);

  void apply(std::span<const double> in, std::span<double> out,
             const simd::KernelTable& kernels = simd::active_kernels()) const;

  /// dt·(total outflow rate); must stay <= cfl_limit.
  double cfl_number() const noexcept { return cfl_number_; }
  bool upwind() const noexcept { return upwind_; }
  std::span<const simd::Tap> taps() const noexcept { return taps_; }

 private:
  std::vector<simd::Tap> taps_;
  std::size_t size_;
  std::size_t safe_begin_;
  std::size_t safe_end_;
  double cfl_number_;
  bool upwind_;
};

/// generator_step of a single substep (lattice coordinates).
std::vector<double> generator_step(std::span<const double> v_next, const levy::LevyTriplet& triplet,
                                   const levy::TruncationFunction& h, const Lattice& lattice);

struct ValueFunction {
  std::size_t nodes = 0;
  std::size_t steps = 0;
  std::vector<double> v;              // (N+1) × nodes
  std::vector<std::uint32_t> argmax;  // N × nodes

  std::span<const double> values(std::size_t k) const { return {v.data() + k * nodes, nodes}; }
  std::span<const std::uint32_t> arg(std::size_t k) const {
    return {argmax.data() + k * nodes, nodes};
  }
};

struct PriceResult {
  double price = 0.0;
  ValueFunction vf;
};

/// Backward operator for a whole uncertainty set on one lattice.
class BackwardOperator {
 public:
  BackwardOperator(const levy::UncertaintySet& theta, const Lattice& lattice);

  std::size_t triplet_count() const noexcept { return ops_.size(); }

  /// m substeps of triplet `index` applied to v_next.
  std::vector<double> propagate(std::span<const double> v_next, std::size_t index) const;

  /// v = max_θ propagate(v_next, θ); lowest index wins ties.
  void step(std::span<const double> v_next, std::span<double> v,
            std::span<std::uint32_t> arg) const;

 private:
  Lattice lattice_;
  std::vector<StepOperator> ops_;
};

/// Terminal values g(exp(x_i)); checks the declared growth bound on the edges.
std::vector<double> terminal_values(const Payoff& f, const Lattice& lattice);

PriceResult price(const Payoff& f, const levy::UncertaintySet& theta, const Lattice& lattice);

/// Recomputes the recursion from vf at t_idx down to s_idx and returns the
/// largest nodewise difference from the stored vf at s_idx.
double dpp_check(const ValueFunction& vf, std::size_t s_idx, std::size_t t_idx,
                 const levy::UncertaintySet& theta, const Lattice& lattice);

struct Interpolated {
  double value;
  bool inside;
};

/// Catmull-Rom cubic on interior cells, linear on the two edge cells and
/// linear extrapolation outside (inside = false).
Interpolated interpolate(std::span<const double> values, const Lattice& lattice, double x);

struct ValuePath {
  std::vector<double> y;             // Y[k] = v_k(log S_k)
  std::vector<std::uint8_t> outside; // 1 where log S_k left the lattice
  double outside_fraction = 0.0;
};

ValuePath value_along_path(const ValueFunction& vf, const paths::PricePath& s,
                           const Lattice& lattice);

/// Follows the stored argmax field at the node nearest log S_k.
paths::Policy argmax_policy(const ValueFunction& vf, const Lattice& lattice);

}  // namespace superhedge::pricer

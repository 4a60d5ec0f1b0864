#pragma once
// Construction of the superhedging integrand from the continuous parts of
// (S, Y):
//
//   C    joint covariation of (S, Y), A = tr C^S  (trace clock)
//   c^S  = dC^S / dA,  c^{SY} = dC^{SY} / dA     (with 0/0 := 0)
//   H    = c^{SY} (c^S)^+                        (Moore-Penrose pseudoinverse)
//
// The empirical route estimates C from a single discrete path; the analytic
// route reads the same quantities off the value function via the chain rule.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "superhedge/levy_model.hpp"
#include "superhedge/path_engine.hpp"
#include "superhedge/robust_pricer.hpp"
#include "superhedge/strategy.hpp"

namespace superhedge::decomp {

using levy::Matrix;
using levy::Vector;

/// Cumulative covariation along the grid; C[k] is (d+1)×(d+1), last row/column
/// belongs to Y. A[k] is the trace of the S block of C[k].
struct JointCharacteristics {
  std::size_t dim = 1;
  std::vector<Matrix> C;
  std::vector<double> A;
};

/// Increment truncation |ΔS^i| <= u_i separating jumps from diffusion.
struct JumpThreshold {
  /// Fixed cutoff for every component when set.
  std::optional<double> fixed;
  /// Otherwise u = alpha_multiplier·σ̂·dt^beta with σ̂ the root-mean-square
  /// per-unit-time increment over the previous `window` retained increments.
  double alpha_multiplier = 3.0;
  double beta = 0.4;
};

/// Jump-truncated realized covariation of (S, Y). Throws ValidationError for
/// window < 2 or mismatched lengths.
JointCharacteristics empirical_joint_characteristics(const paths::PricePath& s,
                                                     std::span<const double> y, double dt,
                                                     std::size_t window,
                                                     const JumpThreshold& threshold = {});

/// How a non-PSD difference quotient for c^S is repaired.
enum class DerivativeMode {
  kProject,     // nearest PSD matrix (clip negative eigenvalues)
  kStrictZero,  // zero, as the indicator 1{c^S ∈ S^d_+} does
};

struct DiffusionDerivatives {
  std::vector<Matrix> cS;   // d×d per grid node
  std::vector<Vector> cSY;  // d per grid node
};

/// Backward difference quotients over `lag` steps (truncated at 0):
///   (C[k] - C[k-lag]) / (A[k] - A[k-lag]),  0/0 := 0.
DiffusionDerivatives lebesgue_derivative(const JointCharacteristics& C, std::size_t lag,
                                         DerivativeMode mode = DerivativeMode::kProject);

inline constexpr double kPinvTol = 1e-10;

/// Eigendecomposition-based Moore-Penrose pseudoinverse of a symmetric
/// matrix; eigenvalues <= tol·λ_max are treated as zero.
Matrix pseudoinverse(const Matrix& m, double tol = kPinvTol);

/// H[k] = c^{SY}[k]·(c^S[k])^+ for every k in the arrays.
Strategy hedge_ratio(std::span<const Vector> cSY, std::span<const Matrix> cS,
                     Provenance provenance = Provenance::kEmpirical);

struct EmpiricalOptions {
  std::size_t lag = 8;
  std::size_t window = 32;
  JumpThreshold threshold;
  DerivativeMode mode = DerivativeMode::kProject;
};

/// Full empirical route on one path: covariation, derivative, hedge ratio for
/// steps 0..N-1.
Strategy empirical_strategy(const paths::PricePath& s, std::span<const double> y, double dt,
                            const EmpiricalOptions& options = {});

/// Node fields for one-dimensional S: c^S = S²·c(θ*), c^{SY} = S·c(θ*)·∂_x v
/// with θ* the stored argmax and x = log S.
struct AnalyticFields {
  std::size_t nodes = 0;
  std::size_t steps = 0;
  std::vector<double> cS;             // N × nodes
  std::vector<double> cSY;            // N × nodes
  std::vector<std::uint8_t> one_sided;  // nodes; 1 where ∂_x v used a one-sided difference

  std::span<const double> cS_at(std::size_t k) const { return {cS.data() + k * nodes, nodes}; }
  std::span<const double> cSY_at(std::size_t k) const { return {cSY.data() + k * nodes, nodes}; }
};

AnalyticFields analytic_characteristics(const pricer::ValueFunction& vf,
                                        const pricer::Lattice& lattice,
                                        const levy::UncertaintySet& theta);

/// Node-level hedge ratios H[k][i] from the analytic fields.
std::vector<double> analytic_node_hedge(const AnalyticFields& fields);

/// Analytic route along a path: fields interpolated at log S_k, then hedge_ratio.
Strategy analytic_strategy(const AnalyticFields& fields, const pricer::Lattice& lattice,
                           const paths::PricePath& s);

/// Root-mean-square of ‖H_a[k] - H_b[k]‖ over k in [from, N).
double route_difference(const Strategy& a, const Strategy& b, std::size_t from = 0);

}  // namespace superhedge::decomp

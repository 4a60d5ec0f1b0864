#pragma once
// Lévy triplets, truncation functions and uncertainty sets of triplets.
//
// An uncertainty set is specified through its "prime" part: pairs (c, F) of a
// diffusion matrix and a finite-activity jump measure. The drift of every
// triplet is then forced by the sigma-martingale condition
//
//     b + ∫ (x - h(x)) F(dx) = 0,
//
// so that the canonical process is a martingale under each constant control.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "superhedge/errors.hpp"

namespace superhedge::levy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sharp cutoff h(x) = x·1{|x| <= r}.
class TruncationFunction {
 public:
  explicit TruncationFunction(double radius = 1.0);

  double radius() const noexcept { return radius_; }

  double operator()(double x) const noexcept;
  Vector operator()(const Vector& x) const;

 private:
  double radius_;
};

struct JumpAtom {
  Vector location;
  double mass = 0.0;
};

/// Finite-activity jump measure F = Σ mass_i δ_{location_i}.
class LevyMeasure {
 public:
  /// Zero measure on R^dim.
  explicit LevyMeasure(int dim = 1);
  /// Throws ValidationError for an atom at the origin, a non-positive or
  /// non-finite mass, or a location of the wrong dimension.
  LevyMeasure(int dim, std::vector<JumpAtom> atoms);

  /// Single atom at `location` with `mass`.
  static LevyMeasure dirac(const Vector& location, double mass);
  static LevyMeasure dirac(double location, double mass);

  int dimension() const noexcept { return dim_; }
  const std::vector<JumpAtom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept;

  /// ψF: every atom's mass multiplied by ψ(location).
  LevyMeasure reweighted(const std::function<double(const Vector&)>& psi) const;

 private:
  int dim_;
  std::vector<JumpAtom> atoms_;
};

struct LevyTriplet {
  Vector b;
  Matrix c;
  LevyMeasure F;

  int dimension() const noexcept { return static_cast<int>(b.size()); }
};

/// Symmetrizes `c` and checks positive semidefiniteness with eigenvalues
/// allowed down to -tol·max(1, λ_max). Throws ValidationError otherwise.
Matrix symmetrized_psd(const Matrix& c, double tol = 1e-10);

/// Builds a triplet after symmetrizing and PSD-checking c.
LevyTriplet make_triplet(const Vector& b, const Matrix& c, LevyMeasure F);

struct JumpIntegrability {
  bool integrable = true;
  double integral = 0.0;  // Σ mass·(|x|² ∧ |x|)
};

/// Membership test for L*: ∫ (|x|² ∧ |x|) F(dx) < ∞.
JumpIntegrability is_integrable_jumps(const LevyMeasure& F);

/// b = -∫ (x - h(x)) F(dx). Throws ValidationError if F is not in L*.
Vector drift_completion(const LevyMeasure& F, const TruncationFunction& h);

/// Default relative cutoff distinguishing S^d_{++} from the PSD boundary.
inline constexpr double kEigTol = 1e-10;

/// True iff F = 0, or λ_min(c) > eig_tol·λ_max(c) with λ_max(c) > 0.
bool has_dominating_diffusion(const Matrix& c, const LevyMeasure& F, double eig_tol = kEigTol);

struct PrimeElement {
  Matrix c;
  LevyMeasure F;
};

/// Membership oracle for Θ'. Exact saturation is a statement about an
/// infinite family, so the set is only ever probed through this predicate.
using Membership = std::function<bool(const Matrix& c, const LevyMeasure& F)>;

/// Closed membership: (c, F) must coincide (within `tol`) with one of the
/// listed elements.
Membership finite_membership(std::vector<PrimeElement> elements, double tol = 1e-12);

/// Conditions a candidate triplet can fail.
enum class Condition {
  kPositiveSemidefinite,
  kIntegrableJumps,
  kDominatingDiffusion,
  kSaturation,
  kPricePositivity,
};

std::string to_string(Condition c);

/// ValidationError carrying the offending element index and condition.
class ConditionError : public ValidationError {
 public:
  ConditionError(std::size_t index, Condition condition, const std::string& detail);

  std::size_t index() const noexcept { return index_; }
  Condition condition() const noexcept { return condition_; }

 private:
  std::size_t index_;
  Condition condition_;
};

struct UncertaintySet {
  std::vector<PrimeElement> prime_elements;
  TruncationFunction truncation;
  std::vector<LevyTriplet> derived_triplets;
  Membership membership;

  int dimension() const;
  std::size_t size() const noexcept { return derived_triplets.size(); }
};

struct BuildOptions {
  /// Reject elements without dominating diffusion.
  bool strict = true;
  /// Require every atom in (-1, ∞)^d so the stochastic exponential stays positive.
  bool require_positive_prices = true;
  double eig_tol = kEigTol;
  /// Defaults to finite_membership over the given elements.
  Membership membership;
};

/// Validates each (c, F), completes the drift and returns Θ.
/// Throws ConditionError naming the first offending index.
UncertaintySet build_theta(std::vector<PrimeElement> prime, const TruncationFunction& h,
                           BuildOptions options = {});

using Density = std::function<double(const Vector&)>;

struct NamedDensity {
  std::string name;
  Density psi;
};

/// Constants 0.5 and 2, plus the atom-wise reweighting ψ(x) = 1 + |x|.
std::vector<NamedDensity> default_densities();

struct SaturationReport {
  bool passed = true;
  std::size_t checks = 0;
  std::optional<std::size_t> failing_element;
  std::optional<std::string> failing_density;
  std::string note;
};

/// Falsification test of the saturation condition: for every element with
/// F != 0 and every ψ, (c, ψF) must still satisfy the membership oracle.
/// A pass only means no counterexample was found in the supplied family.
/// Throws ValidationError if some ψ is not strictly positive on the atoms.
SaturationReport check_saturation(const UncertaintySet& theta,
                                  const std::vector<NamedDensity>& densities);

}  // namespace superhedge::levy

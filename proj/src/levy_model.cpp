#include "superhedge/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superhedge::levy {

TruncationFunction::TruncationFunction(double radius) : radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("truncation radius must be positive and finite");
  }
}

double TruncationFunction::operator()(double x) const noexcept {
  return std::abs(x) <= radius_ ? x : 0.0;
}

Vector TruncationFunction::operator()(const Vector& x) const {
  if (x.norm() <= radius_) return x;
  return Vector::Zero(x.size());
}

LevyMeasure::LevyMeasure(int dim) : dim_(dim) {
  if (dim < 1) throw ValidationError("dimension must be at least 1");
}

LevyMeasure::LevyMeasure(int dim, std::vector<JumpAtom> atoms) : LevyMeasure(dim) {
  for (const auto& a : atoms) {
    if (a.location.size() != dim) {
      throw ValidationError("jump atom dimension mismatch");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw ValidationError("jump atom mass must be positive and finite");
    }
    if (!a.location.allFinite()) throw ValidationError("jump atom location not finite");
    if (a.location.norm() == 0.0) {
      throw ValidationError("jump measure must not charge the origin");
    }
  }
  atoms_ = std::move(atoms);
}

LevyMeasure LevyMeasure::dirac(const Vector& location, double mass) {
  return LevyMeasure(static_cast<int>(location.size()), {JumpAtom{location, mass}});
}

LevyMeasure LevyMeasure::dirac(double location, double mass) {
  return dirac(Vector::Constant(1, location), mass);
}

double LevyMeasure::total_mass() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass;
  return m;
}

LevyMeasure LevyMeasure::reweighted(const std::function<double(const Vector&)>& psi) const {
  std::vector<JumpAtom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back({a.location, a.mass * psi(a.location)});
  return LevyMeasure(dim_, std::move(out));
}

Matrix symmetrized_psd(const Matrix& c, double tol) {
  if (c.rows() != c.cols() || c.rows() == 0) {
    throw ValidationError("diffusion matrix must be square and nonempty");
  }
  if (!c.allFinite()) throw ValidationError("diffusion matrix not finite");
  Matrix sym = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmin < -tol * std::max(1.0, std::abs(lmax))) {
    std::ostringstream os;
    os << "diffusion matrix not positive semidefinite (min eigenvalue " << lmin << ")";
    throw ValidationError(os.str());
  }
  return sym;
}

LevyTriplet make_triplet(const Vector& b, const Matrix& c, LevyMeasure F) {
  if (b.size() != c.rows() || F.dimension() != b.size()) {
    throw ValidationError("triplet dimension mismatch");
  }
  return LevyTriplet{b, symmetrized_psd(c), std::move(F)};
}

JumpIntegrability is_integrable_jumps(const LevyMeasure& F) {
  JumpIntegrability r;
  for (const auto& a : F.atoms()) {
    const double n = a.location.norm();
    r.integral += a.mass * std::min(n * n, n);
  }
  r.integrable = std::isfinite(r.integral);
  return r;
}

Vector drift_completion(const LevyMeasure& F, const TruncationFunction& h) {
  if (!is_integrable_jumps(F).integrable) {
    throw ValidationError("jump measure is not in L* (non-integrable large jumps)");
  }
  Vector b = Vector::Zero(F.dimension());
  for (const auto& a : F.atoms()) b -= a.mass * (a.location - h(a.location));
  return b;
}

bool has_dominating_diffusion(const Matrix& c, const LevyMeasure& F, double eig_tol) {
  if (F.empty()) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  return lmax > 0.0 && lmin > eig_tol * lmax;
}

namespace {

bool same_measure(const LevyMeasure& a, const LevyMeasure& b, double tol) {
  if (a.dimension() != b.dimension() || a.atoms().size() != b.atoms().size()) return false;
  // Atom order is part of the representation; configs list atoms in a fixed order.
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    const auto& x = a.atoms()[i];
    const auto& y = b.atoms()[i];
    if ((x.location - y.location).norm() > tol) return false;
    if (std::abs(x.mass - y.mass) > tol * std::max(1.0, std::abs(x.mass))) return false;
  }
  return true;
}

}  // namespace

Membership finite_membership(std::vector<PrimeElement> elements, double tol) {
  return [elements = std::move(elements), tol](const Matrix& c, const LevyMeasure& F) {
    return std::any_of(elements.begin(), elements.end(), [&](const PrimeElement& e) {
      return e.c.rows() == c.rows() && (e.c - c).norm() <= tol * std::max(1.0, e.c.norm()) &&
             same_measure(e.F, F, tol);
    });
  };
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::kPositiveSemidefinite: return "positive semidefinite diffusion";
    case Condition::kIntegrableJumps: return "integrable jumps (L*)";
    case Condition::kDominatingDiffusion: return "dominating diffusion";
    case Condition::kSaturation: return "saturation";
    case Condition::kPricePositivity: return "price positivity (jumps > -1)";
  }
  return "unknown";
}

ConditionError::ConditionError(std::size_t index, Condition condition, const std::string& detail)
    : ValidationError("element " + std::to_string(index) + ": " + to_string(condition) +
                      " violated" + (detail.empty() ? "" : " (" + detail + ")")),
      index_(index),
      condition_(condition) {}

int UncertaintySet::dimension() const {
  if (prime_elements.empty()) return 0;
  return static_cast<int>(prime_elements.front().c.rows());
}

UncertaintySet build_theta(std::vector<PrimeElement> prime, const TruncationFunction& h,
                           BuildOptions options) {
  if (prime.empty()) throw ValidationError("uncertainty set must be nonempty");
  const auto dim = prime.front().c.rows();

  UncertaintySet theta{{}, h, {}, {}};
  theta.derived_triplets.reserve(prime.size());
  for (std::size_t i = 0; i < prime.size(); ++i) {
    auto& e = prime[i];
    if (e.c.rows() != dim || e.F.dimension() != dim) {
      throw ConditionError(i, Condition::kPositiveSemidefinite, "dimension mismatch");
    }
    try {
      e.c = symmetrized_psd(e.c);
    } catch (const ValidationError& err) {
      throw ConditionError(i, Condition::kPositiveSemidefinite, err.what());
    }
    if (!is_integrable_jumps(e.F).integrable) {
      throw ConditionError(i, Condition::kIntegrableJumps, "");
    }
    if (options.strict && !has_dominating_diffusion(e.c, e.F, options.eig_tol)) {
      throw ConditionError(i, Condition::kDominatingDiffusion,
                           "jumps require a strictly positive definite diffusion");
    }
    if (options.require_positive_prices) {
      for (const auto& a : e.F.atoms()) {
        if ((a.location.array() <= -1.0).any()) {
          throw ConditionError(i, Condition::kPricePositivity, "atom component <= -1");
        }
      }
    }
    theta.derived_triplets.push_back(LevyTriplet{drift_completion(e.F, h), e.c, e.F});
  }
  theta.membership = options.membership ? std::move(options.membership) : finite_membership(prime);
  theta.prime_elements = std::move(prime);
  return theta;
}

std::vector<NamedDensity> default_densities() {
  return {
      {"const 0.5", [](const Vector&) { return 0.5; }},
      {"const 2", [](const Vector&) { return 2.0; }},
      {"1+|x|", [](const Vector& x) { return 1.0 + x.norm(); }},
  };
}

SaturationReport check_saturation(const UncertaintySet& theta,
                                  const std::vector<NamedDensity>& densities) {
  SaturationReport report;
  report.note =
      "falsification over a finite density family; a pass is not a proof of saturation";
  if (!theta.membership) throw ValidationError("uncertainty set has no membership oracle");
  for (std::size_t i = 0; i < theta.prime_elements.size(); ++i) {
    const auto& e = theta.prime_elements[i];
    if (e.F.empty()) continue;
    for (const auto& d : densities) {
      for (const auto& a : e.F.atoms()) {
        const double v = d.psi(a.location);
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ValidationError("density '" + d.name + "' is not strictly positive on the atoms");
        }
      }
      ++report.checks;
      if (!theta.membership(e.c, e.F.reweighted(d.psi))) {
        report.passed = false;
        report.failing_element = i;
        report.failing_density = d.name;
        return report;
      }
    }
  }
  return report;
}

}  // namespace superhedge::levy

#include "superhedge/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace superhedge::decomp {

JointCharacteristics empirical_joint_characteristics(const paths::PricePath& s,
                                                     std::span<const double> y, double dt,
                                                     std::size_t window,
                                                     const JumpThreshold& threshold) {
  if (window < 2) throw ValidationError("covariation window must be at least 2");
  const std::size_t n = s.steps();
  const std::size_t d = s.dim;
  if (y.size() != n + 1) throw ValidationError("Y path length does not match the price path");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");

  JointCharacteristics out;
  out.dim = d;
  out.C.assign(n + 1, Matrix::Zero(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1)));
  out.A.assign(n + 1, 0.0);

  const double scale = std::pow(dt, threshold.beta);
  std::deque<Vector> recent;  // retained ΔS, at most `window`
  Vector dz(static_cast<Eigen::Index>(d + 1));
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      dz(static_cast<Eigen::Index>(i)) = s.s[j * d + i] - s.s[(j - 1) * d + i];
    }
    dz(static_cast<Eigen::Index>(d)) = y[j] - y[j - 1];

    bool keep = true;
    for (std::size_t i = 0; i < d && keep; ++i) {
      double u = std::numeric_limits<double>::infinity();
      if (threshold.fixed) {
        u = *threshold.fixed;
      } else if (recent.size() >= 2) {
        double ss = 0.0;
        for (const auto& r : recent) ss += r(static_cast<Eigen::Index>(i)) * r(static_cast<Eigen::Index>(i));
        const double sigma = std::sqrt(ss / static_cast<double>(recent.size()) / dt);
        u = threshold.alpha_multiplier * sigma * scale;
      }
      keep = std::abs(dz(static_cast<Eigen::Index>(i))) <= u;
    }

    out.C[j] = out.C[j - 1];
    if (keep) {
      out.C[j].noalias() += dz * dz.transpose();
      recent.push_back(dz.head(static_cast<Eigen::Index>(d)));
      if (recent.size() > window) recent.pop_front();
    }
    out.A[j] = out.C[j].topLeftCorner(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)).trace();
  }
  return out;
}

namespace {

/// PSD check with a tolerance relative to the largest eigenvalue; returns the
/// repaired matrix.
Matrix repair_psd(const Matrix& m, DerivativeMode mode) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const auto& ev = eig.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (ev.minCoeff() >= -1e-12 * scale) return m;
  if (mode == DerivativeMode::kStrictZero) return Matrix::Zero(m.rows(), m.cols());
  return eig.eigenvectors() * ev.cwiseMax(0.0).asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

DiffusionDerivatives lebesgue_derivative(const JointCharacteristics& jc, std::size_t lag,
                                         DerivativeMode mode) {
  if (lag == 0) throw ValidationError("derivative lag must be at least one grid step");
  const auto d = static_cast<Eigen::Index>(jc.dim);
  DiffusionDerivatives out;
  out.cS.reserve(jc.C.size());
  out.cSY.reserve(jc.C.size());
  for (std::size_t k = 0; k < jc.C.size(); ++k) {
    const std::size_t k0 = k >= lag ? k - lag : 0;
    const double dA = jc.A[k] - jc.A[k0];
    if (!(dA > 0.0)) {
      out.cS.push_back(Matrix::Zero(d, d));
      out.cSY.push_back(Vector::Zero(d));
      continue;
    }
    const Matrix dC = jc.C[k] - jc.C[k0];
    Matrix cs = dC.topLeftCorner(d, d) / dA;
    cs = 0.5 * (cs + cs.transpose());
    out.cS.push_back(repair_psd(cs, mode));
    out.cSY.push_back(dC.block(0, d, d, 1) / dA);
  }
  return out;
}

Matrix pseudoinverse(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("pseudoinverse expects a square matrix");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const auto& ev = eig.eigenvalues();
  const double lmax = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(ev.size());
  if (lmax > 0.0) {
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) > tol * lmax) inv(i) = 1.0 / ev(i);
    }
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Strategy hedge_ratio(std::span<const Vector> cSY, std::span<const Matrix> cS, Provenance provenance) {
  if (cSY.size() != cS.size()) throw ValidationError("c^SY and c^S arrays are not aligned");
  const std::size_t d = cS.empty() ? 1 : static_cast<std::size_t>(cS.front().rows());
  Strategy H(cS.size(), d, provenance);
  for (std::size_t k = 0; k < cS.size(); ++k) {
    // c^S is symmetric, so the row vector c^SY (c^S)^+ is the transpose of (c^S)^+ c^SY.
    const Vector h = pseudoinverse(cS[k]) * cSY[k];
    for (std::size_t i = 0; i < d; ++i) H.h[k * d + i] = h(static_cast<Eigen::Index>(i));
  }
  return H;
}

Strategy empirical_strategy(const paths::PricePath& s, std::span<const double> y, double dt,
                            const EmpiricalOptions& options) {
  const auto jc = empirical_joint_characteristics(s, y, dt, options.window, options.threshold);
  const auto der = lebesgue_derivative(jc, options.lag, options.mode);
  const std::size_t n = s.steps();
  return hedge_ratio(std::span(der.cSY).first(n), std::span(der.cS).first(n), Provenance::kEmpirical);
}

namespace {

/// 1×1 pseudoinverse.
double pinv_scalar(double x) { return x != 0.0 ? 1.0 / x : 0.0; }

}  // namespace

AnalyticFields analytic_characteristics(const pricer::ValueFunction& vf,
                                        const pricer::Lattice& lattice,
                                        const levy::UncertaintySet& theta) {
  if (theta.dimension() != 1) throw ValidationError("analytic characteristics are one-dimensional");
  const std::size_t n = vf.nodes;
  AnalyticFields f;
  f.nodes = n;
  f.steps = vf.steps;
  f.cS.resize(vf.steps * n);
  f.cSY.resize(vf.steps * n);
  f.one_sided.assign(n, 0);
  f.one_sided.front() = 1;
  f.one_sided.back() = 1;

  std::vector<double> c(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) c[i] = theta.derived_triplets[i].c(0, 0);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::exp(lattice.node(i));
  const double dx = lattice.dx();

  for (std::size_t k = 0; k < vf.steps; ++k) {
    const auto v = vf.values(k);
    const auto arg = vf.arg(k);
    for (std::size_t i = 0; i < n; ++i) {
      double vx;
      if (i == 0) vx = (v[1] - v[0]) / dx;
      else if (i == n - 1) vx = (v[n - 1] - v[n - 2]) / dx;
      else vx = (v[i + 1] - v[i - 1]) / (2.0 * dx);
      const double ci = c[arg[i]];
      f.cS[k * n + i] = s[i] * ci * s[i];
      f.cSY[k * n + i] = s[i] * ci * vx;
    }
  }
  return f;
}

std::vector<double> analytic_node_hedge(const AnalyticFields& fields) {
  std::vector<double> h(fields.cS.size());
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = fields.cSY[j] * pinv_scalar(fields.cS[j]);
  return h;
}

Strategy analytic_strategy(const AnalyticFields& fields, const pricer::Lattice& lattice,
                           const paths::PricePath& s) {
  if (s.dim != 1 || s.steps() != fields.steps) {
    throw ValidationError("price path does not match the analytic fields");
  }
  Strategy H(fields.steps, 1, Provenance::kAnalytic);
  for (std::size_t k = 0; k < fields.steps; ++k) {
    const double x = std::log(s.s[k]);
    const double cs = pricer::interpolate(fields.cS_at(k), lattice, x).value;
    const double csy = pricer::interpolate(fields.cSY_at(k), lattice, x).value;
    H.h[k] = csy * pinv_scalar(cs);
  }
  return H;
}

double route_difference(const Strategy& a, const Strategy& b, std::size_t from) {
  if (a.dim != b.dim || a.steps() != b.steps()) throw ValidationError("strategies are not aligned");
  const std::size_t n = a.steps();
  if (from >= n) return 0.0;
  double ss = 0.0;
  for (std::size_t k = from; k < n; ++k) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.dim; ++i) {
      const double diff = a.h[k * a.dim + i] - b.h[k * a.dim + i];
      sq += diff * diff;
    }
    ss += sq;
  }
  return std::sqrt(ss / static_cast<double>(n - from));
}

}  // namespace superhedge::decomp

#include "superhedge/path_engine.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace superhedge::paths {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("time horizon must be positive and finite");
  }
  if (steps == 0) throw ValidationError("time grid needs at least one step");
}

double TimeGrid::time(std::size_t k) const noexcept {
  if (k == steps_) return horizon_;
  return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
}

Policy constant_policy(std::size_t index) {
  return [index](const PolicyContext&) { return index; };
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path_index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(path_index + 0x632be59bd9b4e019ULL));
}

PathSimulator::PathSimulator(const levy::UncertaintySet& theta, TimeGrid grid)
    : grid_(grid), dim_(static_cast<std::size_t>(theta.dimension())) {
  if (theta.size() == 0) throw ValidationError("uncertainty set is empty");
  const double dt = grid_.dt();
  const auto d = static_cast<Eigen::Index>(dim_);
  for (const auto& tr : theta.derived_triplets) {
    StepModel m;
    levy::Vector drift = tr.b;
    for (const auto& a : tr.F.atoms()) drift -= a.mass * theta.truncation(a.location);
    drift *= dt;
    m.drift.assign(drift.data(), drift.data() + d);

    Eigen::SelfAdjointEigenSolver<levy::Matrix> eig(tr.c * dt);
    levy::Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    levy::Matrix sq = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
    m.sqrt_cov.resize(dim_ * dim_);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) m.sqrt_cov[r * d + c] = sq(r, c);
    }
    for (const auto& a : tr.F.atoms()) {
      m.atom_means.push_back(a.mass * dt);
      for (Eigen::Index i = 0; i < d; ++i) m.atom_locs.push_back(a.location(i));
    }
    models_.push_back(std::move(m));
  }
}

SamplePath PathSimulator::simulate(const Policy& policy, std::uint64_t seed,
                                   std::uint64_t path_index) const {
  const std::size_t n = grid_.steps();
  const std::size_t d = dim_;
  SamplePath p;
  p.dim = d;
  p.x.assign((n + 1) * d, 0.0);
  p.controls.resize(n);
  p.drift.resize(n * d);
  p.diffusion.resize(n * d);
  p.jump_offsets.assign(n + 1, 0);

  std::mt19937_64 rng(stream_seed(seed, path_index));
  std::normal_distribution<double> normal;
  std::vector<double> z(d);
  std::vector<double> s(d, 1.0);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = policy(PolicyContext{k, grid_.time(k), p.state(k), s});
    if (idx >= models_.size()) throw ValidationError("policy returned an invalid triplet index");
    p.controls[k] = static_cast<std::uint32_t>(idx);
    const StepModel& m = models_[idx];

    for (auto& zi : z) zi = normal(rng);
    for (std::size_t i = 0; i < d; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < d; ++j) g += m.sqrt_cov[i * d + j] * z[j];
      p.drift[k * d + i] = m.drift[i];
      p.diffusion[k * d + i] = g;
    }
    for (std::size_t a = 0; a < m.atom_means.size(); ++a) {
      std::poisson_distribution<int> count(m.atom_means[a]);
      for (int c = count(rng); c > 0; --c) {
        p.jump_sizes.insert(p.jump_sizes.end(), m.atom_locs.begin() + a * d,
                            m.atom_locs.begin() + (a + 1) * d);
      }
    }
    p.jump_offsets[k + 1] = p.jump_sizes.size() / d;

    for (std::size_t i = 0; i < d; ++i) {
      double inc = p.drift[k * d + i] + p.diffusion[k * d + i];
      for (std::size_t j = p.jump_offsets[k]; j < p.jump_offsets[k + 1]; ++j) {
        inc += p.jump_sizes[j * d + i];
      }
      p.x[(k + 1) * d + i] = p.x[k * d + i] + inc;
      if (std::isnan(s[i])) continue;
      try {
        s[i] *= step_factor(p, k, i);
      } catch (const NumericalError&) {
        s[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return p;
}

SamplePath simulate(const levy::UncertaintySet& theta, const Policy& policy, const TimeGrid& grid,
                    std::uint64_t seed) {
  return PathSimulator(theta, grid).simulate(policy, seed, 0);
}

double step_factor(const SamplePath& path, std::size_t k, std::size_t i) {
  const std::size_t d = path.dim;
  double cont = path.x[(k + 1) * d + i] - path.x[k * d + i];
  double jumps = 1.0;
  for (std::size_t j = path.jump_offsets[k]; j < path.jump_offsets[k + 1]; ++j) {
    const double zj = path.jump_sizes[j * d + i];
    cont -= zj;
    jumps *= 1.0 + zj;
  }
  const double f = path.jump_count(k) == 0 ? 1.0 + cont : (1.0 + cont) * jumps;
  if (!(f > 0.0)) {
    std::ostringstream os;
    os << "stochastic exponential lost positivity at step " << k << " (factor " << f << ")";
    throw NumericalError(os.str());
  }
  return f;
}

PricePath stochastic_exponential(const SamplePath& path) {
  const std::size_t d = path.dim;
  const std::size_t n = path.steps();
  PricePath out;
  out.dim = d;
  out.s.assign((n + 1) * d, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      out.s[(k + 1) * d + i] = out.s[k * d + i] * step_factor(path, k, i);
    }
  }
  return out;
}

std::vector<double> stochastic_integral(const Strategy& H, const PricePath& s) {
  const std::size_t n = s.steps();
  if (H.dim != s.dim || H.steps() != n) {
    throw ValidationError("strategy and price path dimensions do not match");
  }
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double inc = 0.0;
    for (std::size_t i = 0; i < s.dim; ++i) {
      inc += H.h[k * s.dim + i] * (s.s[(k + 1) * s.dim + i] - s.s[k * s.dim + i]);
    }
    out[k + 1] = out[k] + inc;
  }
  return out;
}

void write_ensemble(std::ostream& out, const TimeGrid& grid, std::span<const SamplePath> xs,
                    std::span<const PricePath> ss) {
  if (xs.size() != ss.size()) throw ValidationError("ensemble X and S counts differ");
  const std::size_t d = xs.empty() ? 1 : xs.front().dim;
  out << "# superhedge ensemble dim=" << d << " steps=" << grid.steps()
      << " horizon=" << std::setprecision(17) << grid.horizon() << '\n';
  out << "path,t";
  for (std::size_t i = 1; i <= d; ++i) out << ",X" << i;
  for (std::size_t i = 1; i <= d; ++i) out << ",S" << i;
  out << ",control\n";
  out << std::setprecision(17);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const auto& x = xs[p];
    const auto& s = ss[p];
    if (x.dim != d || x.steps() != grid.steps() || s.steps() != grid.steps()) {
      throw ValidationError("ensemble path does not match the grid");
    }
    for (std::size_t k = 0; k <= grid.steps(); ++k) {
      out << p << ',' << grid.time(k);
      for (double v : x.state(k)) out << ',' << v;
      for (double v : s.state(k)) out << ',' << v;
      out << ',' << (k < grid.steps() ? static_cast<std::int64_t>(x.controls[k]) : -1) << '\n';
    }
  }
}

Ensemble read_ensemble(std::istream& in) {
  Ensemble e;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# superhedge ensemble", 0) != 0) {
    throw ValidationError("not an ensemble file (missing header)");
  }
  {
    std::istringstream hs(line.substr(std::string("# superhedge ensemble").size()));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const auto key = tok.substr(0, eq);
      const auto val = tok.substr(eq + 1);
      if (key == "dim") e.dim = std::stoul(val);
      else if (key == "steps") e.steps = std::stoul(val);
      else if (key == "horizon") e.horizon = std::stod(val);
    }
  }
  if (e.dim == 0 || e.steps == 0) throw ValidationError("ensemble header incomplete");
  std::getline(in, line);  // column names
  const std::size_t cols = 2 + 2 * e.dim + 1;
  std::vector<double> fields(cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= cols) throw ValidationError("ensemble row has too many columns");
      fields[c++] = std::stod(cell);
    }
    if (c != cols) throw ValidationError("ensemble row has too few columns");
    const auto id = static_cast<std::size_t>(fields[0]);
    if (e.paths.empty() || e.paths.back().path_id != id) {
      e.paths.push_back(EnsembleRecord{id, {}, {}, {}});
    }
    auto& r = e.paths.back();
    r.x.insert(r.x.end(), fields.begin() + 2, fields.begin() + 2 + e.dim);
    r.s.insert(r.s.end(), fields.begin() + 2 + e.dim, fields.begin() + 2 + 2 * e.dim);
    r.controls.push_back(static_cast<std::int64_t>(fields[cols - 1]));
  }
  for (const auto& r : e.paths) {
    if (r.controls.size() != e.steps + 1) throw ValidationError("ensemble path has wrong length");
  }
  return e;
}

}  // namespace superhedge::paths

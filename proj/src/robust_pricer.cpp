#include "superhedge/robust_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace superhedge::pricer {

// ---------------------------------------------------------------------------
// Payoff

Payoff Payoff::call(double strike) {
  Payoff p(Kind::kCall, strike, 0.0);
  p.growth_ = 1.0;
  return p;
}

Payoff Payoff::put(double strike) {
  Payoff p(Kind::kPut, strike, 0.0);
  p.growth_ = std::max(1.0, std::abs(strike));
  return p;
}

Payoff Payoff::digital(double strike, double cash) {
  Payoff p(Kind::kDigital, strike, cash);
  p.growth_ = std::max(1.0, std::abs(cash));
  return p;
}

Payoff Payoff::linear() { return Payoff(Kind::kLinear, 0.0, 0.0); }

Payoff Payoff::constant(double value) {
  Payoff p(Kind::kConstant, 0.0, value);
  p.growth_ = std::max(1.0, std::abs(value));
  return p;
}

Payoff Payoff::tabulated(std::vector<double> s, std::vector<double> g) {
  if (s.size() < 2 || s.size() != g.size()) {
    throw ValidationError("tabulated payoff needs at least two (s, g) pairs");
  }
  if (!std::is_sorted(s.begin(), s.end()) ||
      std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ValidationError("tabulated payoff abscissae must be strictly increasing");
  }
  Payoff p(Kind::kTabulated, 0.0, 0.0);
  p.table_s_ = std::move(s);
  p.table_g_ = std::move(g);
  // Piecewise linear with linear tails: the bound is attained at a knot or
  // in the limit slope of a tail.
  double k = 0.0;
  for (std::size_t i = 0; i < p.table_s_.size(); ++i) {
    k = std::max(k, std::abs(p.table_g_[i]) / (1.0 + std::abs(p.table_s_[i])));
  }
  const std::size_t n = p.table_s_.size();
  const double slope_hi = (p.table_g_[n - 1] - p.table_g_[n - 2]) / (p.table_s_[n - 1] - p.table_s_[n - 2]);
  p.growth_ = std::max({k, std::abs(slope_hi), 1e-300});
  return p;
}

double Payoff::operator()(double s) const {
  switch (kind_) {
    case Kind::kCall: return std::max(s - strike_, 0.0);
    case Kind::kPut: return std::max(strike_ - s, 0.0);
    case Kind::kDigital: return s >= strike_ ? level_ : 0.0;
    case Kind::kLinear: return s;
    case Kind::kConstant: return level_;
    case Kind::kTabulated: {
      const auto& xs = table_s_;
      const auto& ys = table_g_;
      std::size_t i;
      if (s <= xs.front()) i = 0;
      else if (s >= xs.back()) i = xs.size() - 2;
      else i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), s) - xs.begin()) - 1;
      const double w = (s - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + w * (ys[i + 1] - ys[i]);
    }
  }
  return 0.0;
}

Payoff Payoff::with_growth_bound(double k) const {
  if (!(k > 0.0)) throw ValidationError("growth bound must be positive");
  Payoff p = *this;
  p.growth_ = k;
  return p;
}

std::string Payoff::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kCall: os << "call(K=" << strike_ << ")"; break;
    case Kind::kPut: os << "put(K=" << strike_ << ")"; break;
    case Kind::kDigital: os << "digital(K=" << strike_ << ", cash=" << level_ << ")"; break;
    case Kind::kLinear: os << "linear(S_T)"; break;
    case Kind::kConstant: os << "constant(" << level_ << ")"; break;
    case Kind::kTabulated: os << "tabulated(" << table_s_.size() << " knots)"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Lattice

Lattice::Lattice(double x_min, double x_max, std::size_t nodes, paths::TimeGrid grid,
                 std::size_t substeps, double cfl_limit)
    : x_min_(x_min),
      dx_(0.0),
      nodes_(nodes),
      grid_(grid),
      substeps_(substeps),
      cfl_limit_(cfl_limit) {
  if (nodes < 5) throw ValidationError("lattice needs at least 5 nodes");
  if (!(x_max > x_min)) throw ValidationError("lattice span must be positive");
  if (substeps == 0) throw ValidationError("substep count must be positive");
  if (!(cfl_limit > 0.0 && cfl_limit <= 1.0)) throw ValidationError("cfl_limit must lie in (0, 1]");
  dx_ = (x_max - x_min) / static_cast<double>(nodes - 1);
}

Lattice Lattice::with_substeps(std::size_t m) const {
  return Lattice(x_min_, x_max(), nodes_, grid_, m, cfl_limit_);
}

namespace {

struct Coefficients {
  double c;
  double a;          // coefficient of v' after collecting the compensator term
  double jump_rate;  // total mass
};

Coefficients collect(const levy::LevyTriplet& t, const levy::TruncationFunction& h) {
  if (t.dimension() != 1) throw ValidationError("the lattice pricer is one-dimensional");
  Coefficients k{t.c(0, 0), t.b(0), 0.0};
  for (const auto& atom : t.F.atoms()) {
    k.a -= atom.mass * h(atom.location(0));
    k.jump_rate += atom.mass;
  }
  return k;
}

bool needs_upwind(const Coefficients& k, double dx) { return std::abs(k.a) * dx > k.c; }

double outflow_rate(const Coefficients& k, double dx) {
  double rate = k.c / (dx * dx) + k.jump_rate;
  if (needs_upwind(k, dx)) rate += std::abs(k.a) / dx;
  return rate;
}

}  // namespace

Lattice Lattice::for_model(const levy::UncertaintySet& theta, paths::TimeGrid grid,
                           LatticeOptions options) {
  const auto triplets = log_price_triplets(theta);
  double c_max = 0.0;
  double reach = 0.0;
  double count = 0.0;
  for (const auto& t : triplets) {
    c_max = std::max(c_max, t.c(0, 0));
    count = std::max(count, t.F.total_mass() * grid.horizon());
    for (const auto& a : t.F.atoms()) reach = std::max(reach, std::abs(a.location(0)));
  }
  double half = options.half_span.value_or(
      options.span_multiplier * (std::sqrt(c_max * grid.horizon()) + reach * count));
  half = std::max(half, 0.25);
  std::size_t nodes = std::max<std::size_t>(options.nodes, 5);
  if (nodes % 2 == 0) ++nodes;

  Lattice lat(-half, half, nodes, grid, 1, options.cfl_limit);
  double rate = 0.0;
  for (const auto& t : triplets) rate = std::max(rate, outflow_rate(collect(t, theta.truncation), lat.dx()));
  auto m = static_cast<std::size_t>(std::ceil(grid.dt() * rate / options.cfl_limit));
  m = std::max<std::size_t>(m, 1);
  while (grid.dt() / static_cast<double>(m) * rate > options.cfl_limit) ++m;
  return lat.with_substeps(m);
}

levy::LevyTriplet log_price_triplet(const levy::LevyTriplet& x, const levy::TruncationFunction& h) {
  if (x.dimension() != 1) throw ValidationError("log-price triplets are one-dimensional");
  const double c = x.c(0, 0);
  double b = x.b(0) - 0.5 * c;
  std::vector<levy::JumpAtom> atoms;
  for (const auto& a : x.F.atoms()) {
    const double z = a.location(0);
    if (!(z > -1.0)) throw ValidationError("jump atom <= -1 has no log-price image");
    const double y = std::log1p(z);
    b += a.mass * (h(y) - h(z));
    if (y != 0.0) atoms.push_back({levy::Vector::Constant(1, y), a.mass});
  }
  return levy::LevyTriplet{levy::Vector::Constant(1, b), x.c, levy::LevyMeasure(1, std::move(atoms))};
}

std::vector<levy::LevyTriplet> log_price_triplets(const levy::UncertaintySet& theta) {
  std::vector<levy::LevyTriplet> out;
  out.reserve(theta.size());
  for (const auto& t : theta.derived_triplets) out.push_back(log_price_triplet(t, theta.truncation));
  return out;
}

// ---------------------------------------------------------------------------
// StepOperator

StepOperator::StepOperator(const levy::LevyTriplet& triplet, const levy::TruncationFunction& h,
                           const Lattice& lattice)
    : size_(lattice.size()) {
  const Coefficients k = collect(triplet, h);
  const double dx = lattice.dx();
  const double dt = lattice.substep_dt();
  const double diff = 0.5 * k.c / (dx * dx);
  upwind_ = needs_upwind(k, dx);
  cfl_number_ = dt * outflow_rate(k, dx);
  if (!(cfl_number_ <= lattice.cfl_limit())) {
    std::ostringstream os;
    os << "CFL violation: dt·rate = " << cfl_number_ << " > " << lattice.cfl_limit()
       << " for triplet (b=" << k.a << ", c=" << k.c << ", jump rate=" << k.jump_rate << ")";
    throw NumericalError(os.str());
  }

  std::map<std::ptrdiff_t, double> w;
  if (!upwind_) {
    w[-1] += dt * (diff - k.a / (2.0 * dx));
    w[+1] += dt * (diff + k.a / (2.0 * dx));
  } else if (k.a > 0.0) {
    w[-1] += dt * diff;
    w[+1] += dt * (diff + k.a / dx);
  } else {
    w[-1] += dt * (diff - k.a / dx);
    w[+1] += dt * diff;
  }
  for (const auto& atom : triplet.F.atoms()) {
    const double q = atom.location(0) / dx;
    const double j = std::floor(q);
    const double frac = q - j;
    const auto off = static_cast<std::ptrdiff_t>(j);
    if (1.0 - frac > 0.0) w[off] += dt * atom.mass * (1.0 - frac);
    if (frac > 0.0) w[off + 1] += dt * atom.mass * frac;
  }
  w[0] += 1.0 - cfl_number_;

  for (const auto& [off, weight] : w) {
    if (weight != 0.0) taps_.push_back({off, weight});
  }
  const std::ptrdiff_t lo = taps_.front().offset;
  const std::ptrdiff_t hi = taps_.back().offset;
  const auto n = static_cast<std::ptrdiff_t>(size_);
  const std::ptrdiff_t begin = std::max<std::ptrdiff_t>(1, -lo);
  const std::ptrdiff_t end = std::min<std::ptrdiff_t>(n - 1, n - hi);
  safe_begin_ = static_cast<std::size_t>(std::min(begin, n - 1));
  safe_end_ = static_cast<std::size_t>(std::max(end, begin));
  safe_end_ = std::min(safe_end_, size_ - 1);
  if (safe_end_ < safe_begin_) safe_end_ = safe_begin_;
}

void StepOperator::apply(std::span<const double> in, std::span<double> out,
                         const simd::KernelTable& kernels) const {
  const std::size_t n = size_;
  const auto value_at = [&](std::ptrdiff_t idx) {
    if (idx < 0) return in[0] + static_cast<double>(idx) * (in[1] - in[0]);
    const auto last = static_cast<std::ptrdiff_t>(n - 1);
    if (idx > last) return in[n - 1] + static_cast<double>(idx - last) * (in[n - 1] - in[n - 2]);
    return in[static_cast<std::size_t>(idx)];
  };
  const auto edge = [&](std::size_t i) {
    double acc = 0.0;
    for (const auto& t : taps_) acc = acc + t.weight * value_at(static_cast<std::ptrdiff_t>(i) + t.offset);
    out[i] = acc;
  };
  out[0] = in[0];
  out[n - 1] = in[n - 1];
  for (std::size_t i = 1; i < safe_begin_; ++i) edge(i);
  kernels.stencil(in, taps_, safe_begin_, safe_end_, out);
  for (std::size_t i = std::max<std::size_t>(safe_end_, 1); i + 1 < n; ++i) edge(i);
}

std::vector<double> generator_step(std::span<const double> v_next, const levy::LevyTriplet& triplet,
                                   const levy::TruncationFunction& h, const Lattice& lattice) {
  if (v_next.size() != lattice.size()) throw ValidationError("value vector does not match lattice");
  StepOperator op(triplet, h, lattice);
  std::vector<double> out(v_next.size());
  op.apply(v_next, out);
  return out;
}

// ---------------------------------------------------------------------------
// Backward recursion

BackwardOperator::BackwardOperator(const levy::UncertaintySet& theta, const Lattice& lattice)
    : lattice_(lattice) {
  const auto triplets = log_price_triplets(theta);
  ops_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    try {
      ops_.emplace_back(triplets[i], theta.truncation, lattice);
    } catch (const NumericalError& e) {
      throw NumericalError("triplet " + std::to_string(i) + ": " + e.what());
    }
  }
}

std::vector<double> BackwardOperator::propagate(std::span<const double> v_next,
                                                std::size_t index) const {
  std::vector<double> a(v_next.begin(), v_next.end());
  std::vector<double> b(a.size());
  for (std::size_t m = 0; m < lattice_.substeps(); ++m) {
    ops_[index].apply(a, b);
    a.swap(b);
  }
  return a;
}

void BackwardOperator::step(std::span<const double> v_next, std::span<double> v,
                            std::span<std::uint32_t> arg) const {
  const auto& kernels = simd::active_kernels();
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    auto cand = propagate(v_next, i);
    if (i == 0) {
      std::copy(cand.begin(), cand.end(), v.begin());
      std::fill(arg.begin(), arg.end(), 0u);
    } else {
      kernels.max_update(v, arg, cand, static_cast<std::uint32_t>(i));
    }
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError("non-finite value in backward recursion");
  }
}

std::vector<double> terminal_values(const Payoff& f, const Lattice& lattice) {
  std::vector<double> g(lattice.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f(std::exp(lattice.node(i)));
  for (std::size_t i : {std::size_t{0}, g.size() - 1}) {
    const double s = std::exp(lattice.node(i));
    if (std::abs(g[i]) > f.growth_bound() * (1.0 + s) * (1.0 + 1e-12)) {
      throw ValidationError("payoff exceeds its declared growth bound on the lattice boundary");
    }
  }
  return g;
}

PriceResult price(const Payoff& f, const levy::UncertaintySet& theta, const Lattice& lattice) {
  const std::size_t n = lattice.size();
  const std::size_t steps = lattice.grid().steps();
  BackwardOperator op(theta, lattice);

  PriceResult r;
  r.vf.nodes = n;
  r.vf.steps = steps;
  r.vf.v.resize((steps + 1) * n);
  r.vf.argmax.resize(steps * n);
  const auto g = terminal_values(f, lattice);
  std::copy(g.begin(), g.end(), r.vf.v.begin() + static_cast<std::ptrdiff_t>(steps * n));
  for (std::size_t k = steps; k-- > 0;) {
    op.step(std::span<const double>(r.vf.v.data() + (k + 1) * n, n),
            std::span<double>(r.vf.v.data() + k * n, n),
            std::span<std::uint32_t>(r.vf.argmax.data() + k * n, n));
  }
  r.price = interpolate(r.vf.values(0), lattice, 0.0).value;
  return r;
}

double dpp_check(const ValueFunction& vf, std::size_t s_idx, std::size_t t_idx,
                 const levy::UncertaintySet& theta, const Lattice& lattice) {
  if (s_idx > t_idx || t_idx > vf.steps) throw ValidationError("dpp_check needs s_idx <= t_idx <= N");
  const std::size_t n = vf.nodes;
  BackwardOperator op(theta, lattice);
  std::vector<double> cur(vf.values(t_idx).begin(), vf.values(t_idx).end());
  std::vector<double> next(n);
  std::vector<std::uint32_t> arg(n);
  for (std::size_t k = t_idx; k-- > s_idx;) {
    op.step(cur, next, arg);
    cur.swap(next);
  }
  double defect = 0.0;
  const auto stored = vf.values(s_idx);
  for (std::size_t i = 0; i < n; ++i) defect = std::max(defect, std::abs(cur[i] - stored[i]));
  return defect;
}

Interpolated interpolate(std::span<const double> v, const Lattice& lattice, double x) {
  const std::size_t n = lattice.size();
  double q = (x - lattice.x_min()) / lattice.dx();
  // Snap round-off (log of exp of a node) onto the node.
  if (std::abs(q - std::round(q)) <= 1e-9) q = std::round(q);
  if (q < 0.0) return {v[0] + q * (v[1] - v[0]), false};
  const double last = static_cast<double>(n - 1);
  if (q > last) return {v[n - 1] + (q - last) * (v[n - 1] - v[n - 2]), false};
  auto i = static_cast<std::size_t>(std::floor(q));
  if (i >= n - 1) i = n - 2;
  const double t = q - static_cast<double>(i);
  if (t == 0.0) return {v[i], true};
  if (i == 0 || i + 2 >= n) return {v[i] + t * (v[i + 1] - v[i]), true};
  const double p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
  const double value =
      0.5 * (2.0 * p1 + (p2 - p0) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
             (3.0 * (p1 - p2) + p3 - p0) * t * t * t);
  return {value, true};
}

ValuePath value_along_path(const ValueFunction& vf, const paths::PricePath& s,
                           const Lattice& lattice) {
  if (s.dim != 1) throw ValidationError("value_along_path expects a one-dimensional price path");
  if (s.steps() != vf.steps) throw ValidationError("price path length does not match value function");
  ValuePath out;
  out.y.resize(vf.steps + 1);
  out.outside.resize(vf.steps + 1);
  std::size_t outside = 0;
  for (std::size_t k = 0; k <= vf.steps; ++k) {
    const auto r = interpolate(vf.values(k), lattice, std::log(s.s[k]));
    out.y[k] = r.value;
    out.outside[k] = r.inside ? 0 : 1;
    outside += r.inside ? 0 : 1;
  }
  out.outside_fraction = static_cast<double>(outside) / static_cast<double>(vf.steps + 1);
  return out;
}

paths::Policy argmax_policy(const ValueFunction& vf, const Lattice& lattice) {
  // vf must outlive the returned policy.
  return [vf = &vf, x0 = lattice.x_min(), dx = lattice.dx()](const paths::PolicyContext& ctx) {
    if (!(ctx.s[0] > 0.0)) throw NumericalError("argmax policy needs a positive price state");
    const std::size_t k = std::min(ctx.step, vf->steps - 1);
    const double q = std::round((std::log(ctx.s[0]) - x0) / dx);
    const double clamped = std::clamp(q, 0.0, static_cast<double>(vf->nodes - 1));
    return static_cast<std::size_t>(vf->arg(k)[static_cast<std::size_t>(clamped)]);
  };
}

}  // namespace superhedge::pricer

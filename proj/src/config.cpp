#include "superhedge/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace superhedge::config {

using nlohmann::json;

std::vector<double> Range::points() const {
  if (steps == 0) throw ValidationError("range steps must be positive");
  if (steps == 1) return {min};
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  out.back() = max;
  return out;
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + "." + key + ": " + e.what());
  }
}

levy::Vector parse_vector(const json& j, int dim, const std::string& where) {
  levy::Vector v(dim);
  if (j.is_number()) {
    if (dim != 1) throw ValidationError(where + ": scalar given for dimension " + std::to_string(dim));
    v(0) = j.get<double>();
    return v;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ValidationError(where + ": expected a vector of length " + std::to_string(dim));
  }
  for (int i = 0; i < dim; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

levy::Matrix parse_matrix(const json& j, int dim, const std::string& where) {
  levy::Matrix m(dim, dim);
  if (j.is_number()) {
    if (dim != 1) throw ValidationError(where + ": scalar given for dimension " + std::to_string(dim));
    m(0, 0) = j.get<double>();
    return m;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ValidationError(where + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  }
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ValidationError(where + ": matrix row " + std::to_string(r) + " has wrong length");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

std::vector<levy::JumpAtom> parse_jumps(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected a list of atoms");
  std::vector<levy::JumpAtom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    check_keys(j[i], {"at", "mass"}, w);
    if (!j[i].contains("at") || !j[i].contains("mass")) throw ValidationError(w + ": needs 'at' and 'mass'");
    atoms.push_back({parse_vector(j[i]["at"], dim, w + ".at"), j[i]["mass"].get<double>()});
  }
  return atoms;
}

Range parse_range(const json& j, const std::string& where) {
  check_keys(j, {"min", "max", "steps"}, where);
  Range r;
  read(j, "min", r.min, where);
  r.max = r.min;
  read(j, "max", r.max, where);
  read(j, "steps", r.steps, where);
  if (r.steps == 0 || r.max < r.min) throw ValidationError(where + ": need min <= max and steps >= 1");
  return r;
}

json matrix_json(const levy::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json jumps_json(const std::vector<levy::JumpAtom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) {
    out.push_back({{"at", std::vector<double>(a.location.data(), a.location.data() + a.location.size())},
                   {"mass", a.mass}});
  }
  return out;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"steps", r.steps}}; }

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, {"model", "numerics", "payoff", "run"}, "config");
  RunConfig cfg;

  if (j.contains("model")) {
    const auto& m = j["model"];
    check_keys(m, {"dimension", "truncation_radius", "strict", "elements", "family"}, "model");
    read(m, "dimension", cfg.model.dimension, "model");
    read(m, "truncation_radius", cfg.model.truncation_radius, "model");
    read(m, "strict", cfg.model.strict, "model");
    const int d = cfg.model.dimension;
    if (d < 1) throw ValidationError("model.dimension must be >= 1");
    if (m.contains("elements") && m.contains("family")) {
      throw ValidationError("model: give either 'elements' or 'family', not both");
    }
    if (m.contains("elements")) {
      const auto& els = m["elements"];
      if (!els.is_array() || els.empty()) throw ValidationError("model.elements must be a nonempty list");
      for (std::size_t i = 0; i < els.size(); ++i) {
        const std::string w = "model.elements[" + std::to_string(i) + "]";
        check_keys(els[i], {"c", "jumps"}, w);
        if (!els[i].contains("c")) throw ValidationError(w + ": missing 'c'");
        auto atoms = els[i].contains("jumps") ? parse_jumps(els[i]["jumps"], d, w + ".jumps")
                                              : std::vector<levy::JumpAtom>{};
        cfg.model.elements.push_back({parse_matrix(els[i]["c"], d, w + ".c"), levy::LevyMeasure(d, std::move(atoms))});
      }
    }
    if (m.contains("family")) {
      const auto& f = m["family"];
      check_keys(f, {"sigma", "base_c", "jumps", "intensity", "unbounded_intensity"}, "model.family");
      Family fam;
      fam.base_c = levy::Matrix::Identity(d, d);
      if (f.contains("sigma")) fam.sigma = parse_range(f["sigma"], "model.family.sigma");
      if (f.contains("base_c")) fam.base_c = parse_matrix(f["base_c"], d, "model.family.base_c");
      if (f.contains("jumps")) fam.jumps = parse_jumps(f["jumps"], d, "model.family.jumps");
      if (f.contains("intensity")) fam.intensity = parse_range(f["intensity"], "model.family.intensity");
      read(f, "unbounded_intensity", fam.unbounded_intensity, "model.family");
      if (fam.sigma.min < 0.0) throw ValidationError("model.family.sigma must be nonnegative");
      if (fam.intensity.min < 0.0) throw ValidationError("model.family.intensity must be nonnegative");
      cfg.model.family = std::move(fam);
    }
  }
  if (cfg.model.elements.empty() && !cfg.model.family) {
    Family fam;
    fam.base_c = levy::Matrix::Identity(cfg.model.dimension, cfg.model.dimension);
    cfg.model.family = fam;
  }

  if (j.contains("numerics")) {
    const auto& n = j["numerics"];
    const std::string w = "numerics";
    check_keys(n, {"horizon", "steps", "nodes", "span_multiplier", "cfl_limit", "lag", "window",
                   "threshold_alpha", "threshold_beta", "hedge_c1", "fail_quota", "eig_tol"}, w);
    auto& s = cfg.numerics;
    read(n, "horizon", s.horizon, w);
    read(n, "steps", s.steps, w);
    read(n, "nodes", s.nodes, w);
    read(n, "span_multiplier", s.span_multiplier, w);
    read(n, "cfl_limit", s.cfl_limit, w);
    read(n, "lag", s.lag, w);
    read(n, "window", s.window, w);
    read(n, "threshold_alpha", s.threshold_alpha, w);
    read(n, "threshold_beta", s.threshold_beta, w);
    read(n, "hedge_c1", s.hedge_c1, w);
    read(n, "fail_quota", s.fail_quota, w);
    read(n, "eig_tol", s.eig_tol, w);
    if (!(s.threshold_beta > 0.0 && s.threshold_beta < 0.5)) {
      throw ValidationError("numerics.threshold_beta must lie in (0, 1/2)");
    }
  }

  if (j.contains("payoff")) {
    const auto& p = j["payoff"];
    const std::string w = "payoff";
    check_keys(p, {"kind", "strike", "cash", "value", "table_s", "table_g", "growth_bound"}, w);
    read(p, "kind", cfg.payoff.kind, w);
    read(p, "strike", cfg.payoff.strike, w);
    read(p, "cash", cfg.payoff.cash, w);
    read(p, "value", cfg.payoff.value, w);
    read(p, "table_s", cfg.payoff.table_s, w);
    read(p, "table_g", cfg.payoff.table_g, w);
    if (p.contains("growth_bound")) {
      double g = 0.0;
      read(p, "growth_bound", g, w);
      cfg.payoff.growth_bound = g;
    }
    build_payoff(cfg.payoff);
  }

  if (j.contains("run")) {
    const auto& r = j["run"];
    const std::string w = "run";
    check_keys(r, {"paths", "seed", "output_dir", "export_paths", "hedge_paths"}, w);
    read(r, "paths", cfg.run.paths, w);
    read(r, "seed", cfg.run.seed, w);
    read(r, "output_dir", cfg.run.output_dir, w);
    read(r, "export_paths", cfg.run.export_paths, w);
    read(r, "hedge_paths", cfg.run.hedge_paths, w);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config parse error: " + std::string(e.what()));
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json model{{"dimension", cfg.model.dimension},
             {"truncation_radius", cfg.model.truncation_radius},
             {"strict", cfg.model.strict}};
  if (cfg.model.family) {
    const auto& f = *cfg.model.family;
    model["family"] = {{"sigma", range_json(f.sigma)},
                       {"base_c", matrix_json(f.base_c)},
                       {"jumps", jumps_json(f.jumps)},
                       {"intensity", range_json(f.intensity)},
                       {"unbounded_intensity", f.unbounded_intensity}};
  } else {
    json els = json::array();
    for (const auto& e : cfg.model.elements) els.push_back({{"c", matrix_json(e.c)}, {"jumps", jumps_json(e.F.atoms())}});
    model["elements"] = els;
  }
  const auto& n = cfg.numerics;
  json numerics{{"horizon", n.horizon},         {"steps", n.steps},
                {"nodes", n.nodes},             {"span_multiplier", n.span_multiplier},
                {"cfl_limit", n.cfl_limit},     {"lag", n.lag},
                {"window", n.window},           {"threshold_alpha", n.threshold_alpha},
                {"threshold_beta", n.threshold_beta}, {"hedge_c1", n.hedge_c1},
                {"fail_quota", n.fail_quota},   {"eig_tol", n.eig_tol}};
  const auto& p = cfg.payoff;
  json payoff{{"kind", p.kind}, {"strike", p.strike}, {"cash", p.cash}, {"value", p.value},
              {"table_s", p.table_s}, {"table_g", p.table_g}};
  if (p.growth_bound) payoff["growth_bound"] = *p.growth_bound;
  json run{{"paths", cfg.run.paths}, {"seed", cfg.run.seed},
           {"export_paths", cfg.run.export_paths}, {"hedge_paths", cfg.run.hedge_paths}};
  return {{"model", model}, {"numerics", numerics}, {"payoff", payoff}, {"run", run}};
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<levy::PrimeElement> prime_elements(const ModelSpec& model) {
  if (!model.family) return model.elements;
  const auto& f = *model.family;
  const int d = model.dimension;
  std::vector<levy::PrimeElement> out;
  const auto lambdas = f.jumps.empty() ? std::vector<double>{0.0} : f.intensity.points();
  for (double sigma : f.sigma.points()) {
    for (double lambda : lambdas) {
      levy::LevyMeasure F(d);
      if (lambda > 0.0) {
        std::vector<levy::JumpAtom> atoms;
        for (const auto& a : f.jumps) atoms.push_back({a.location, lambda * a.mass});
        F = levy::LevyMeasure(d, std::move(atoms));
      }
      out.push_back({sigma * sigma * f.base_c, std::move(F)});
    }
  }
  return out;
}

levy::Membership model_membership(const ModelSpec& model) {
  if (!model.family) return levy::finite_membership(model.elements);
  const Family f = *model.family;
  return [f](const levy::Matrix& c, const levy::LevyMeasure& F) {
    constexpr double tol = 1e-9;
    const double base = f.base_c.trace();
    if (!(base > 0.0)) return false;
    const double s2 = c.trace() / base;
    if ((c - s2 * f.base_c).norm() > tol * std::max(1.0, c.norm())) return false;
    const double sigma = std::sqrt(std::max(s2, 0.0));
    if (sigma < f.sigma.min - tol || sigma > f.sigma.max + tol) return false;
    if (F.empty()) return f.jumps.empty() || f.intensity.min <= 0.0;
    if (F.atoms().size() != f.jumps.size()) return false;
    double lambda = -1.0;
    for (std::size_t i = 0; i < f.jumps.size(); ++i) {
      const auto& a = F.atoms()[i];
      if ((a.location - f.jumps[i].location).norm() > tol) return false;
      const double ratio = a.mass / f.jumps[i].mass;
      if (lambda < 0.0) lambda = ratio;
      else if (std::abs(ratio - lambda) > tol * std::max(1.0, lambda)) return false;
    }
    if (f.unbounded_intensity) return lambda > 0.0;
    return lambda >= f.intensity.min - tol && lambda <= f.intensity.max + tol;
  };
}

levy::UncertaintySet build_model(const RunConfig& cfg, std::optional<bool> strict) {
  levy::BuildOptions opt;
  opt.strict = strict.value_or(cfg.model.strict);
  opt.eig_tol = cfg.numerics.eig_tol;
  opt.membership = model_membership(cfg.model);
  return levy::build_theta(prime_elements(cfg.model), levy::TruncationFunction(cfg.model.truncation_radius),
                           std::move(opt));
}

pricer::Payoff build_payoff(const PayoffSpec& spec) {
  auto make = [&]() {
    if (spec.kind == "call") return pricer::Payoff::call(spec.strike);
    if (spec.kind == "put") return pricer::Payoff::put(spec.strike);
    if (spec.kind == "digital") return pricer::Payoff::digital(spec.strike, spec.cash);
    if (spec.kind == "linear") return pricer::Payoff::linear();
    if (spec.kind == "constant") return pricer::Payoff::constant(spec.value);
    if (spec.kind == "tabulated") return pricer::Payoff::tabulated(spec.table_s, spec.table_g);
    throw ValidationError("payoff.kind must be one of call, put, digital, linear, constant, tabulated");
  };
  auto p = make();
  if (spec.growth_bound) p = p.with_growth_bound(*spec.growth_bound);
  return p;
}

paths::TimeGrid time_grid(const RunConfig& cfg) {
  return paths::TimeGrid(cfg.numerics.horizon, cfg.numerics.steps);
}

pricer::LatticeOptions lattice_options(const RunConfig& cfg) {
  pricer::LatticeOptions o;
  o.nodes = cfg.numerics.nodes;
  o.span_multiplier = cfg.numerics.span_multiplier;
  o.cfl_limit = cfg.numerics.cfl_limit;
  return o;
}

}  // namespace superhedge::config

#include "superhedge/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "superhedge/config.hpp"
#include "superhedge/decomposition.hpp"
#include "superhedge/parallel.hpp"
#include "superhedge/verification.hpp"

namespace superhedge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  config::RunConfig cfg;
  std::string hash;
  fs::path out;
};

Context load(const CommandOptions& opts) {
  Context ctx;
  ctx.cfg = config::load_config(opts.config);
  if (opts.seed) ctx.cfg.run.seed = *opts.seed;
  set_thread_count(opts.threads);
  ctx.hash = config::config_hash(ctx.cfg);
  ctx.out = opts.out ? *opts.out : fs::path(ctx.cfg.run.output_dir);
  fs::create_directories(ctx.out);
  return ctx;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ValidationError("cannot write " + p.string());
  f << std::setprecision(17);
  return f;
}

void write_json(const fs::path& p, const json& j) {
  auto f = open_out(p);
  f << j.dump(2) << '\n';
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("missing artifact " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("unreadable artifact " + p.string() + ": " + e.what());
  }
}

/// Hash from the "# config_hash=..." first line of a CSV artifact.
std::string csv_hash(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  if (!in || !std::getline(in, line)) throw ValidationError("missing artifact " + p.string());
  const std::string tag = "# config_hash=";
  if (line.rfind(tag, 0) != 0) throw ValidationError(p.string() + " has no config hash header");
  return line.substr(tag.size());
}

void require_hash(const std::string& found, const std::string& expected, const fs::path& p) {
  if (found != expected) {
    throw ValidationError("config hash mismatch: " + p.string() + " has " + found + ", config has " + expected);
  }
}

struct Priced {
  levy::UncertaintySet theta;
  pricer::Payoff f;
  pricer::Lattice lattice;
  pricer::PriceResult result;
};

Priced price_model(const config::RunConfig& cfg, std::size_t steps, std::size_t nodes) {
  if (cfg.model.dimension != 1) {
    throw ValidationError("the lattice pricer is one-dimensional; model.dimension must be 1");
  }
  auto theta = config::build_model(cfg);
  auto f = config::build_payoff(cfg.payoff);
  auto opts = config::lattice_options(cfg);
  opts.nodes = nodes;
  auto lattice = pricer::Lattice::for_model(theta, paths::TimeGrid(cfg.numerics.horizon, steps), opts);
  auto result = pricer::price(f, theta, lattice);
  return {std::move(theta), std::move(f), std::move(lattice), std::move(result)};
}

Priced price_model(const config::RunConfig& cfg) {
  return price_model(cfg, cfg.numerics.steps, cfg.numerics.nodes);
}

verify::Tolerances tolerances(const config::RunConfig& cfg) {
  verify::Tolerances t;
  t.c1 = cfg.numerics.hedge_c1;
  t.fail_quota = cfg.numerics.fail_quota;
  return t;
}

decomp::EmpiricalOptions empirical_options(const config::RunConfig& cfg, bool strict) {
  decomp::EmpiricalOptions o;
  o.lag = cfg.numerics.lag;
  o.window = cfg.numerics.window;
  o.threshold.alpha_multiplier = cfg.numerics.threshold_alpha;
  o.threshold.beta = cfg.numerics.threshold_beta;
  o.mode = strict ? decomp::DerivativeMode::kStrictZero : decomp::DerivativeMode::kProject;
  return o;
}

/// Checks price.csv against the config when it exists.
void check_price_artifact(const Context& ctx) {
  const auto p = ctx.out / "price.csv";
  if (fs::exists(p)) require_hash(csv_hash(p), ctx.hash, p);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

int run_validate(const CommandOptions& opts, std::ostream& log) {
  auto ctx = load(opts);
  const auto prime = config::prime_elements(ctx.cfg.model);
  const levy::TruncationFunction h(ctx.cfg.model.truncation_radius);

  levy::BuildOptions bopt;
  bopt.strict = true;
  bopt.eig_tol = ctx.cfg.numerics.eig_tol;

  json elements = json::array();
  bool ok = true;
  std::ostringstream text;
  text << "# config_hash=" << ctx.hash << '\n';
  text << "dimension " << ctx.cfg.model.dimension << ", elements " << prime.size()
       << ", truncation radius " << ctx.cfg.model.truncation_radius << '\n';
  for (std::size_t i = 0; i < prime.size(); ++i) {
    json e{{"index", i}};
    try {
      levy::build_theta({prime[i]}, h, bopt);
      const auto jumps = levy::is_integrable_jumps(prime[i].F);
      e["passed"] = true;
      e["jump_integral"] = jumps.integral;
      text << "element " << i << ": ok\n";
    } catch (const levy::ConditionError& err) {
      ok = false;
      e["passed"] = false;
      e["condition"] = levy::to_string(err.condition());
      text << "element " << i << ": " << levy::to_string(err.condition()) << " violated\n";
    }
    elements.push_back(e);
  }

  json sat{{"checked", false}};
  if (ok) {
    const auto theta = config::build_model(ctx.cfg, true);
    const auto rep = levy::check_saturation(theta, levy::default_densities());
    sat = {{"checked", true}, {"passed", rep.passed}, {"checks", rep.checks}, {"note", rep.note}};
    if (rep.passed) {
      text << "saturation: pass (" << rep.checks << " checks; " << rep.note << ")\n";
    } else {
      ok = false;
      const auto elem = rep.failing_element.value_or(0);
      const auto dens = rep.failing_density.value_or("");
      sat["failing_element"] = elem;
      sat["failing_density"] = dens;
      text << "saturation: fail (element " << elem << ", density '" << dens << "' leaves the set)\n";
    }
  } else {
    text << "saturation: not checked\n";
  }
  text << "status: " << (ok ? "ok" : "failed") << '\n';

  auto f = open_out(ctx.out / "validate.txt");
  f << text.str();
  write_json(ctx.out / "validate.json",
             {{"config_hash", ctx.hash}, {"elements", elements}, {"saturation", sat}, {"passed", ok}});
  log << text.str();
  return ok ? kExitOk : kExitValidation;
}

int run_price(const CommandOptions& opts, std::ostream& log) {
  auto ctx = load(opts);
  const auto pr = price_model(ctx.cfg);
  const auto& lat = pr.lattice;
  const auto& vf = pr.result.vf;
  const auto& grid = lat.grid();

  {
    auto f = open_out(ctx.out / "price.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "price,steps,nodes,substeps,dx,x_min,x_max,triplets\n";
    f << pr.result.price << ',' << grid.steps() << ',' << lat.size() << ',' << lat.substeps() << ','
      << lat.dx() << ',' << lat.x_min() << ',' << lat.x_max() << ',' << pr.theta.size() << '\n';
  }
  {
    auto f = open_out(ctx.out / "surface.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "t,x,s,v\n";
    for (std::size_t k = 0; k <= grid.steps(); ++k) {
      const auto v = vf.values(k);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        f << grid.time(k) << ',' << lat.node(i) << ',' << std::exp(lat.node(i)) << ',' << v[i] << '\n';
      }
    }
  }
  {
    auto f = open_out(ctx.out / "argmax.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "t,x,index\n";
    for (std::size_t k = 0; k < grid.steps(); ++k) {
      const auto a = vf.arg(k);
      for (std::size_t i = 0; i < lat.size(); ++i) f << grid.time(k) << ',' << lat.node(i) << ',' << a[i] << '\n';
    }
  }
  log << std::setprecision(17) << "price " << pr.result.price << " (" << pr.f.describe() << ", "
      << pr.theta.size() << " triplets, " << lat.size() << " nodes, " << grid.steps() << " steps x "
      << lat.substeps() << " substeps)\n";
  return kExitOk;
}

int run_hedge(const CommandOptions& opts, std::ostream& log) {
  auto ctx = load(opts);
  check_price_artifact(ctx);
  const auto pr = price_model(ctx.cfg);
  const auto& lat = pr.lattice;
  const auto& grid = lat.grid();
  const auto fields = decomp::analytic_characteristics(pr.result.vf, lat, pr.theta);
  const auto eopt = empirical_options(ctx.cfg, opts.strict_limsup);
  const paths::PathSimulator sim(pr.theta, grid);
  const auto policy = verify::adversarial_policy(pr.result.vf, lat);

  const std::size_t m = ctx.cfg.run.hedge_paths;
  std::vector<paths::SamplePath> xs(m);
  std::vector<paths::PricePath> ss(m);
  std::vector<Strategy> ha(m), he(m);
  std::vector<double> diff(m), outside(m);
  parallel_for(m, [&](std::size_t i) {
    xs[i] = sim.simulate(policy.policy, ctx.cfg.run.seed, i);
    ss[i] = paths::stochastic_exponential(xs[i]);
    const auto y = pricer::value_along_path(pr.result.vf, ss[i], lat);
    ha[i] = decomp::analytic_strategy(fields, lat, ss[i]);
    he[i] = decomp::empirical_strategy(ss[i], y.y, grid.dt(), eopt);
    diff[i] = decomp::route_difference(he[i], ha[i], eopt.lag);
    outside[i] = y.outside_fraction;
  });

  {
    auto f = open_out(ctx.out / "hedge.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "path,t,H1,provenance\n";
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto* s : {&ha[i], &he[i]}) {
        for (std::size_t k = 0; k < s->steps(); ++k) {
          f << i << ',' << grid.time(k) << ',' << s->h[k] << ',' << to_string(s->provenance) << '\n';
        }
      }
    }
  }
  {
    const std::size_t e = std::min(m, ctx.cfg.run.export_paths);
    auto f = open_out(ctx.out / "paths.csv");
    paths::write_ensemble(f, grid, std::span(xs).first(e), std::span(ss).first(e));
  }

  double mean = 0.0, worst = 0.0, out_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean += diff[i];
    worst = std::max(worst, diff[i]);
    out_mean += outside[i];
  }
  if (m > 0) {
    mean /= static_cast<double>(m);
    out_mean /= static_cast<double>(m);
  }
  std::size_t one_sided = 0;
  for (auto b : fields.one_sided) one_sided += b;
  const json summary{
      {"config_hash", ctx.hash},
      {"paths", m},
      {"policy", policy.name},
      {"seed", ctx.cfg.run.seed},
      {"lag", eopt.lag},
      {"window", eopt.window},
      {"derivative_mode", opts.strict_limsup ? "strict-zero" : "psd-project"},
      {"route_difference", {{"median", median(diff)}, {"mean", mean}, {"max", worst}}},
      {"outside_fraction_mean", out_mean},
      {"one_sided_nodes", one_sided}};
  write_json(ctx.out / "hedge_summary.json", summary);
  log << std::setprecision(6) << "hedge: " << m << " paths, route difference median " << median(diff)
      << ", max " << worst << '\n';
  return kExitOk;
}

int run_verify(const CommandOptions& opts, std::ostream& log) {
  auto ctx = load(opts);
  const auto& cfg = ctx.cfg;
  const auto pr = price_model(cfg);
  const auto& lat = pr.lattice;
  const auto& grid = lat.grid();
  const auto tol = tolerances(cfg);
  const auto seed = cfg.run.seed;

  double x0 = pr.result.price;
  std::string x0_source = "recomputed";
  const auto price_csv = ctx.out / "price.csv";
  if (fs::exists(price_csv)) {
    require_hash(csv_hash(price_csv), ctx.hash, price_csv);
    std::ifstream in(price_csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    x0 = std::stod(line.substr(0, line.find(',')));
    x0_source = "price.csv";
  }

  const auto fields = decomp::analytic_characteristics(pr.result.vf, lat, pr.theta);
  const verify::StrategyRule rule = [&](const paths::PricePath& s) {
    return decomp::analytic_strategy(fields, lat, s);
  };
  auto menu = verify::constant_policies(pr.theta);
  menu.push_back(verify::adversarial_policy(pr.result.vf, lat));

  const auto sh = verify::superhedge_test(x0, rule, pr.f, pr.theta, menu, cfg.run.paths, grid, seed, tol);

  const paths::PathSimulator sim(pr.theta, grid);
  std::vector<verify::MonotonicityReport> mono;
  bool mono_ok = true;
  for (const auto& pol : menu) {
    std::vector<verify::HedgedPath> ens(cfg.run.hedge_paths);
    parallel_for(ens.size(), [&](std::size_t i) {
      const auto x = sim.simulate(pol.policy, seed, i);
      auto s = paths::stochastic_exponential(x);
      auto y = pricer::value_along_path(pr.result.vf, s, lat);
      auto h = rule(s);
      ens[i] = {std::move(s), std::move(y.y), std::move(h)};
    });
    mono.push_back(verify::monotonicity_test(ens, sh.eps_hedge));
    mono_ok = mono_ok && mono.back().passed;
  }

  const auto gap = verify::duality_gap(pr.result.price, pr.f, pr.theta, grid, menu, cfg.run.paths, seed, tol);

  struct Level {
    std::size_t steps, nodes;
    verify::GapReport gap;
  };
  std::vector<Level> levels;
  for (std::size_t div : {4, 2}) {
    const std::size_t steps = std::max<std::size_t>(cfg.numerics.steps / div, 1);
    const std::size_t nodes = (cfg.numerics.nodes - 1) / div / 2 * 2 + 1;
    const auto coarse = price_model(cfg, steps, nodes);
    levels.push_back({steps, nodes, verify::duality_gap(coarse.f, coarse.theta, coarse.lattice, cfg.run.paths, seed, tol)});
  }
  levels.push_back({grid.steps(), lat.size(), gap});

  std::ostringstream txt;
  txt << std::setprecision(8);
  txt << "# config_hash=" << ctx.hash << '\n';
  txt << "# " << verify::kPolicyMenuNote << '\n';
  txt << "x0 " << x0 << " (" << x0_source << "), seed " << seed << ", paths per policy " << cfg.run.paths << '\n';
  txt << "eps_hedge = eps_mono = " << sh.eps_hedge << ", fail quota " << tol.fail_quota << '\n';
  txt << "\nsuperhedge (analytic strategy)\n";
  for (const auto& p : sh.policies) {
    txt << "  " << std::left << std::setw(10) << p.name << " fail " << p.fail_fraction << "  max shortfall "
        << p.max_shortfall << "  mean surplus " << p.mean_surplus << "  " << (p.passed ? "PASS" : "FAIL") << '\n';
  }
  txt << "\nmonotonicity of Y - H.S (" << cfg.run.hedge_paths << " paths per policy)\n";
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const auto& m = mono[i];
    txt << "  " << std::left << std::setw(10) << menu[i].name << " p99 " << m.p99_positive << "  exceeding "
        << m.exceeding << "/" << m.increments << "  mean K_T " << m.mean_terminal_k << "  "
        << (m.passed ? "PASS" : "FAIL") << '\n';
  }
  txt << "\nduality gap\n  upper " << gap.upper << "  lower " << gap.lower << " +- " << gap.lower_std_error
      << " (" << gap.best_policy << ")  gap " << gap.gap << "  weak duality "
      << (gap.weak_duality ? "holds" : "VIOLATED") << '\n';
  txt << "\nrefinement\n";
  for (const auto& l : levels) {
    txt << "  steps " << l.steps << "  nodes " << l.nodes << "  upper " << l.gap.upper << "  gap " << l.gap.gap << '\n';
  }
  {
    auto f = open_out(ctx.out / "verify.txt");
    f << txt.str();
  }

  json pol = json::array();
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const auto& p = sh.policies[i];
    const auto& m = mono[i];
    pol.push_back({{"name", p.name},
                   {"fail_fraction", p.fail_fraction},
                   {"max_shortfall", p.max_shortfall},
                   {"mean_surplus", p.mean_surplus},
                   {"superhedge_passed", p.passed},
                   {"mono_p99", m.p99_positive},
                   {"mono_exceeding", m.exceeding},
                   {"mono_increments", m.increments},
                   {"mean_terminal_k", m.mean_terminal_k},
                   {"mono_passed", m.passed}});
  }
  json means = json::array();
  for (const auto& p : gap.policies) means.push_back({{"name", p.name}, {"mean", p.mean}, {"std_error", p.std_error}});
  json refine = json::array();
  for (const auto& l : levels) {
    refine.push_back({{"steps", l.steps}, {"nodes", l.nodes}, {"upper", l.gap.upper}, {"lower", l.gap.lower},
                      {"lower_std_error", l.gap.lower_std_error}, {"gap", l.gap.gap}});
  }
  write_json(ctx.out / "verify.json",
             {{"config_hash", ctx.hash},
              {"note", verify::kPolicyMenuNote},
              {"seed", seed},
              {"paths_per_policy", cfg.run.paths},
              {"x0", x0},
              {"eps_hedge", sh.eps_hedge},
              {"fail_quota", tol.fail_quota},
              {"superhedge_passed", sh.passed},
              {"monotonicity_passed", mono_ok},
              {"policies", pol},
              {"gap", {{"upper", gap.upper}, {"lower", gap.lower}, {"lower_std_error", gap.lower_std_error},
                       {"best_policy", gap.best_policy}, {"gap", gap.gap}, {"weak_duality", gap.weak_duality},
                       {"policy_means", means}}},
              {"refinement", refine}});
  {
    auto f = open_out(ctx.out / "shortfall_hist.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "policy,lo,hi,count\n";
    for (const auto& p : sh.policies) {
      for (const auto& b : verify::histogram(p.shortfalls, 20)) {
        f << p.name << ',' << b.lo << ',' << b.hi << ',' << b.count << '\n';
      }
    }
  }
  {
    auto f = open_out(ctx.out / "gap_refinement.csv");
    f << "# config_hash=" << ctx.hash << '\n';
    f << "steps,nodes,upper,lower,lower_std_error,gap\n";
    for (const auto& l : levels) {
      f << l.steps << ',' << l.nodes << ',' << l.gap.upper << ',' << l.gap.lower << ',' << l.gap.lower_std_error
        << ',' << l.gap.gap << '\n';
    }
  }

  log << txt.str();
  if (!gap.weak_duality) {
    log << "error: weak duality violated beyond the noise band\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_report(const CommandOptions& opts, std::ostream& log) {
  auto ctx = load(opts);
  const auto price_csv = ctx.out / "price.csv";
  const auto verify_json = ctx.out / "verify.json";
  require_hash(csv_hash(price_csv), ctx.hash, price_csv);
  const auto ver = read_json(verify_json);
  require_hash(ver.value("config_hash", ""), ctx.hash, verify_json);

  std::optional<json> val, hed;
  if (fs::exists(ctx.out / "validate.json")) {
    val = read_json(ctx.out / "validate.json");
    require_hash(val->value("config_hash", ""), ctx.hash, ctx.out / "validate.json");
  }
  if (fs::exists(ctx.out / "hedge_summary.json")) {
    hed = read_json(ctx.out / "hedge_summary.json");
    require_hash(hed->value("config_hash", ""), ctx.hash, ctx.out / "hedge_summary.json");
  }

  std::ifstream pin(price_csv);
  std::string line, header, row;
  std::getline(pin, line);
  std::getline(pin, header);
  std::getline(pin, row);

  std::ostringstream md;
  md << std::setprecision(8);
  md << "# Superhedging run summary\n\n";
  md << "Config hash `" << ctx.hash << "`, seed " << ver["seed"].get<std::uint64_t>() << ".\n\n";
  md << "> " << verify::kPolicyMenuNote << ".\n\n";
  if (val) {
    md << "## Validation\n\n";
    md << "Status: " << ((*val)["passed"].get<bool>() ? "ok" : "failed");
    const auto& sat = (*val)["saturation"];
    if (sat.value("checked", false)) md << "; saturation " << (sat["passed"].get<bool>() ? "pass" : "fail");
    md << ".\n\n";
  }
  auto table_row = [](const std::string& csv) {
    std::string out = "|";
    std::stringstream ss(csv);
    for (std::string cell; std::getline(ss, cell, ',');) out += " " + cell + " |";
    return out;
  };
  md << "## Price\n\n" << table_row(header) << "\n|";
  for (auto c = std::count(header.begin(), header.end(), ','); c >= 0; --c) md << "---|";
  md << "\n" << table_row(row) << "\n\n";
  md << "Value surface: `surface.csv`; argmax map: `argmax.csv`.\n\n";
  if (hed) {
    const auto& rd = (*hed)["route_difference"];
    md << "## Hedge routes\n\n";
    md << (*hed)["paths"].get<std::size_t>() << " paths under the `" << (*hed)["policy"].get<std::string>()
       << "` policy, lag " << (*hed)["lag"].get<std::size_t>() << ", "
       << (*hed)["derivative_mode"].get<std::string>() << ".\n";
    md << "RMS difference empirical vs analytic: median " << rd["median"].get<double>() << ", max "
       << rd["max"].get<double>() << ".\n\n";
  }
  md << "## Superhedging and monotonicity\n\n";
  md << "x0 = " << ver["x0"].get<double>() << ", eps = " << ver["eps_hedge"].get<double>() << ", "
     << ver["paths_per_policy"].get<std::size_t>() << " paths per policy.\n\n";
  md << "| policy | fail fraction | max shortfall | superhedge | mono p99 | monotone |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const auto& p : ver["policies"]) {
    md << "| " << p["name"].get<std::string>() << " | " << p["fail_fraction"].get<double>() << " | "
       << p["max_shortfall"].get<double>() << " | " << (p["superhedge_passed"].get<bool>() ? "pass" : "fail")
       << " | " << p["mono_p99"].get<double>() << " | " << (p["mono_passed"].get<bool>() ? "pass" : "fail")
       << " |\n";
  }
  md << "\nShortfall histogram: `shortfall_hist.csv`.\n\n";
  const auto& g = ver["gap"];
  md << "## Duality gap\n\n";
  md << "upper " << g["upper"].get<double>() << ", lower " << g["lower"].get<double>() << " +- "
     << g["lower_std_error"].get<double>() << " (" << g["best_policy"].get<std::string>() << "), gap "
     << g["gap"].get<double>() << ", weak duality " << (g["weak_duality"].get<bool>() ? "holds" : "violated")
     << ".\n\n";
  md << "| steps | nodes | upper | lower | gap |\n|---|---|---|---|---|\n";
  for (const auto& l : ver["refinement"]) {
    md << "| " << l["steps"].get<std::size_t>() << " | " << l["nodes"].get<std::size_t>() << " | "
       << l["upper"].get<double>() << " | " << l["lower"].get<double>() << " | " << l["gap"].get<double>()
       << " |\n";
  }
  md << "\nTable data: `gap_refinement.csv`.\n";

  auto f = open_out(ctx.out / "summary.md");
  f << md.str();
  log << "wrote " << (ctx.out / "summary.md").string() << '\n';
  return kExitOk;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log) {
  try {
    if (name == "validate") return run_validate(opts, log);
    if (name == "price") return run_price(opts, log);
    if (name == "hedge") return run_hedge(opts, log);
    if (name == "verify") return run_verify(opts, log);
    if (name == "report") return run_report(opts, log);
    log << "error: unknown command '" << name << "'\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    log << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace superhedge::cli

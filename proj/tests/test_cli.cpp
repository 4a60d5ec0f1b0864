#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "superhedge/commands.hpp"
#include "superhedge/config.hpp"

using namespace superhedge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("superhedge_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json small_run(json model) {
  return {{"model", std::move(model)},
          {"numerics", {{"steps", 64}, {"nodes", 201}}},
          {"payoff", {{"kind", "call"}, {"strike", 1.0}}},
          {"run", {{"paths", 500}, {"hedge_paths", 40}, {"export_paths", 3}, {"seed", 5}}}};
}

json brownian(double sigma) {
  return {{"family", {{"sigma", {{"min", sigma}, {"max", sigma}, {"steps", 1}}}}}};
}

cli::CommandOptions write_config(const fs::path& dir, const json& j) {
  std::ofstream(dir / "config.json") << j.dump(2);
  cli::CommandOptions o;
  o.config = dir / "config.json";
  o.out = dir / "out";
  return o;
}

int run(const std::string& cmd, const cli::CommandOptions& o) {
  std::ostringstream log;
  const int rc = cli::run_command(cmd, o, log);
  if (rc != 0) MESSAGE(cmd << " -> " << rc << ": " << log.str());
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double csv_price(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // hash
  std::getline(in, line);  // header
  std::getline(in, line);
  return std::stod(line.substr(0, line.find(',')));
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SUPERHEDGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    auto cfg = config::parse_config(json::object());
    CHECK(cfg.numerics.steps == 256);
    CHECK(cfg.numerics.nodes == 801);
    REQUIRE(cfg.model.family.has_value());
    CHECK(config::prime_elements(cfg.model).size() == 1);
    CHECK(config::build_model(cfg).derived_triplets[0].c(0, 0) == doctest::Approx(0.04));
  }
  SUBCASE("unknown keys are rejected") {
    try {
      config::parse_config(json::parse(R"({"numerics": {"stpes": 10}})"));
      FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("stpes") != std::string::npos);
    }
    CHECK_THROWS_AS(config::parse_config(json::parse(R"({"modle": {}})")), ValidationError);
  }
  SUBCASE("invalid values are rejected") {
    CHECK_THROWS_AS(config::parse_config(json::parse(R"({"numerics": {"threshold_beta": 0.5}})")), ValidationError);
    CHECK_THROWS_AS(config::parse_config(json::parse(R"({"numerics": {"steps": "many"}})")), ValidationError);
    CHECK_THROWS_AS(config::parse_config(json::parse(R"({"payoff": {"kind": "swaption"}})")), ValidationError);
    CHECK_THROWS_AS(config::parse_config(json::parse(
                        R"({"model": {"elements": [{"c": 0.04}], "family": {}}})")),
                    ValidationError);
  }
  SUBCASE("hash is stable under a round trip and tracks the seed") {
    auto cfg = config::parse_config(small_run(brownian(0.2)));
    auto again = config::parse_config(config::to_json(cfg));
    CHECK(config::config_hash(cfg) == config::config_hash(again));
    CHECK(config::config_hash(cfg).size() == 16);
    again.run.seed = 6;
    CHECK(config::config_hash(cfg) != config::config_hash(again));
    again = cfg;
    again.run.output_dir = "elsewhere";
    CHECK(config::config_hash(cfg) == config::config_hash(again));
  }
}

TEST_CASE("validate") {
  SUBCASE("Brownian model passes") {
    auto dir = scratch("validate_bm");
    auto o = write_config(dir, small_run(brownian(0.2)));
    CHECK(run("validate", o) == cli::kExitOk);
    CHECK(fs::exists(dir / "out" / "validate.json"));
  }
  SUBCASE("jumps without a diffusion fail") {
    auto dir = scratch("validate_nodiff");
    auto o = write_config(dir, small_run(json::parse(R"({"elements": [{"c": 0.0, "jumps": [{"at": 0.2, "mass": 1.0}]}]})")));
    CHECK(run("validate", o) == cli::kExitValidation);
    CHECK(slurp(dir / "out" / "validate.txt").find("dominating diffusion") != std::string::npos);
  }
  SUBCASE("intensity family") {
    auto model = json::parse(R"({"family": {"sigma": {"min": 0.2, "max": 0.3, "steps": 2},
                                            "jumps": [{"at": -0.5, "mass": 1.0}],
                                            "intensity": {"min": 0.5, "max": 1.0, "steps": 2}}})");
    auto dir = scratch("validate_family");
    CHECK(run("validate", write_config(dir, small_run(model))) == cli::kExitValidation);
    CHECK(slurp(dir / "out" / "validate.txt").find("saturation") != std::string::npos);
    model["family"]["unbounded_intensity"] = true;
    CHECK(run("validate", write_config(dir, small_run(model))) == cli::kExitOk);
  }
  SUBCASE("broken config file") {
    auto dir = scratch("validate_broken");
    std::ofstream(dir / "config.json") << "{ not json";
    cli::CommandOptions o;
    o.config = dir / "config.json";
    o.out = dir / "out";
    CHECK(run("validate", o) == cli::kExitValidation);
  }
}

TEST_CASE("price matches Black-Scholes for a singleton") {
  auto j = small_run(brownian(0.2));
  j["numerics"] = {{"steps", 128}, {"nodes", 801}};
  auto dir = scratch("price_bs");
  auto o = write_config(dir, j);
  REQUIRE(run("price", o) == cli::kExitOk);
  const double p = csv_price(dir / "out" / "price.csv");
  CHECK(std::abs(p - oracle::bs_call(1.0, 1.0, 0.2, 1.0)) <= 2e-3 * p);
  CHECK(fs::exists(dir / "out" / "surface.csv"));
  CHECK(fs::exists(dir / "out" / "argmax.csv"));
}

TEST_CASE("pipeline artifacts, hashes and determinism") {
  auto dir = scratch("pipeline");
  auto o = write_config(dir, small_run(json::parse(R"({"family": {"sigma": {"min": 0.1, "max": 0.3, "steps": 3}}})")));
  const auto out = dir / "out";

  SUBCASE("report needs earlier artifacts") { CHECK(run("report", o) == cli::kExitValidation); }

  SUBCASE("full run") {
    REQUIRE(run("validate", o) == 0);
    REQUIRE(run("price", o) == 0);
    const auto price1 = slurp(out / "price.csv");
    REQUIRE(run("price", o) == 0);
    CHECK(slurp(out / "price.csv") == price1);

    REQUIRE(run("hedge", o) == 0);
    const auto hedge1 = slurp(out / "hedge.csv");
    REQUIRE(run("hedge", o) == 0);
    CHECK(slurp(out / "hedge.csv") == hedge1);
    CHECK(fs::exists(out / "paths.csv"));
    CHECK(fs::exists(out / "hedge_summary.json"));

    REQUIRE(run("verify", o) == 0);
    for (const char* f : {"verify.txt", "verify.json", "shortfall_hist.csv", "gap_refinement.csv"}) {
      CHECK(fs::exists(out / f));
    }
    REQUIRE(run("report", o) == 0);
    const auto report1 = slurp(out / "summary.md");
    REQUIRE(run("report", o) == 0);
    CHECK(slurp(out / "summary.md") == report1);

    auto other = o;
    other.seed = 99;
    CHECK(run("verify", other) == cli::kExitValidation);  // price.csv belongs to seed 5
  }
}

TEST_CASE("unknown command") {
  cli::CommandOptions o;
  std::ostringstream log;
  CHECK(cli::run_command("frobnicate", o, log) == cli::kExitValidation);
}

TEST_CASE("binary exit codes") {
  auto dir = scratch("binary");
  auto o = write_config(dir, small_run(brownian(0.2)));
  const std::string cfg = o.config.string();
  const std::string out = (dir / "out").string();
  CHECK(run_binary("--help") == 0);
  CHECK(run_binary("validate --config " + cfg + " --out " + out) == 0);
  CHECK(run_binary("validate --config " + cfg + " --out " + out + " --seed 7 --threads 1") == 0);
  CHECK(run_binary("validate") == 2);
  CHECK(run_binary("validate --config " + (dir / "missing.json").string()) == 2);
  CHECK(run_binary("bogus --config " + cfg) == 2);
  CHECK(run_binary("verify --config " + cfg + " --out " + (dir / "fresh").string() + " --strict-limsup") == 0);
}

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "superhedge/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust superhedging under Levy-type model uncertainty"};
  app.require_subcommand(1);

  superhedge::cli::CommandOptions opts;
  std::string out;
  std::uint64_t seed = 0;

  for (const char* name : {"validate", "price", "hedge", "verify", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides run.output_dir)");
    sub->add_option("--seed", seed, "master seed (overrides run.seed)");
    sub->add_option("--threads", opts.threads, "worker thread cap")->check(CLI::NonNegativeNumber);
    sub->add_flag("--strict-limsup", opts.strict_limsup, "zero non-PSD derivative ratios instead of projecting");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : superhedge::cli::kExitValidation;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  return superhedge::cli::run_command(sub->get_name(), opts, std::cout);
}

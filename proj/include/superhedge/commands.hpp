#pragma once
// CLI subcommands. Each reads the config, writes its artifacts into the output
// directory and returns the process exit status (0 ok, 2 validation or config
// failure, 3 numerical failure).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace superhedge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides run.output_dir
  std::optional<std::uint64_t> seed;         // overrides run.seed
  int threads = 0;                           // 0 leaves the OpenMP default
  bool strict_limsup = false;                // zero non-PSD derivative ratios
};

int run_validate(const CommandOptions& opts, std::ostream& log);
int run_price(const CommandOptions& opts, std::ostream& log);
int run_hedge(const CommandOptions& opts, std::ostream& log);
int run_verify(const CommandOptions& opts, std::ostream& log);
int run_report(const CommandOptions& opts, std::ostream& log);

/// Dispatches by name; unknown names return kExitValidation.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log);

}  // namespace superhedge::cli

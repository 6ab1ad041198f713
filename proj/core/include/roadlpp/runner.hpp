#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace roadlpp::runner {

// Exit codes shared by the library entry point and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitCensoredOnly = 4;

struct RunOptions {
  std::filesystem::path out_dir;
  int threads = 0;  // 0 = hardware concurrency
  std::optional<std::uint64_t> seed_override;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string error_json;          // set when exit_code is 2 or 3
  std::vector<std::string> files;  // written files, relative to out_dir
};

const std::vector<std::string>& subcommands();

/// Validates the JSON config, runs the subcommand, writes every declared
/// output atomically plus a manifest.json with per-file checksums. Never
/// throws; failures come back as exit codes with machine-readable JSON.
RunResult run(const std::string& subcommand, const std::string& config_text,
              const RunOptions& options);

}  // namespace roadlpp::runner

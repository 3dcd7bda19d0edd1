#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mdr::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kSolverError = 2 };

/// Environment variable consulted when no --out directory is given.
inline constexpr const char* kOutDirEnv = "MDR_OUT_DIR";

/// --out wins, then $MDR_OUT_DIR, then the current directory.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag);

/// Runs every controller of a scenario and writes <name>.<controller>.csv, <name>.svg and
/// <name>.summary.json. Controller failures are recorded in the summary; the exit code
/// reports the most severe one.
int run(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Prints a comparison table and writes <out_dir>/<scenario>.comparison.csv.
int compare(const std::vector<std::filesystem::path>& summary_paths, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

/// Stationary Riccati report for the scenario's system and cost.
int gare(const std::filesystem::path& scenario_path, std::ostream& out, std::ostream& err);

/// Oracle-equivalence property suite over random instances.
int selftest(std::size_t count, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace mdr::cli

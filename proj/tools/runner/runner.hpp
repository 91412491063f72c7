#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dnc::cli {

enum class Pipeline { solve_forward, null_control, null_control_nonlinear, verify };

std::string to_string(Pipeline p);
std::optional<Pipeline> parse_pipeline(std::string_view name);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int assertion_failed = 1;
inline constexpr int config_error = 2;
inline constexpr int solver_error = 3;
}  // namespace exit_code

struct RunOptions {
  /// Output directory from the command line; empty falls back to the config
  /// entry, then DNC_OUT_DIR, then "out".
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool quiet = false;
};

/// Runs one pipeline on a parsed JSON config. Relative paths inside the
/// config resolve against `base_dir`. Returns the process exit code.
int run(Pipeline pipeline, nlohmann::json config, const std::filesystem::path& base_dir,
        const RunOptions& opts);

/// Runs `pipeline` once per value of the scalar config key `axis` and
/// aggregates one row per value into sweep.csv. Each point writes its own
/// outputs under point_<k>/. Returns the worst exit code over the points.
int sweep(Pipeline pipeline, nlohmann::json config, const std::filesystem::path& base_dir,
          const std::string& axis, const std::vector<double>& values, const RunOptions& opts);

/// Loads a config file and runs; file and parse errors map to exit code 2.
int run_file(Pipeline pipeline, const std::filesystem::path& config_path, const RunOptions& opts);
int sweep_file(Pipeline pipeline, const std::filesystem::path& config_path,
               const std::string& axis, const std::vector<double>& values,
               const RunOptions& opts);

}  // namespace dnc::cli

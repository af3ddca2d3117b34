#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "autocat/config.hpp"
#include "autocat/network.hpp"

namespace autocat::cli {

/// Process exit codes.
enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kUsageError = 2,
  kResourceCap = 3,
};

enum class Format { kCsv, kJson };

/// Everything a command needs; a run is fully determined by this and the
/// library version.
struct RunConfig {
  std::filesystem::path config_path;
  std::uint64_t seed = 1;
  double time = 50.0;
  std::uint64_t trajectories = 1;
  std::optional<Count> n;
  std::optional<Count> n_max;
  std::optional<Count> scan;
  std::vector<double> volumes;
  std::optional<std::filesystem::path> out;
  std::optional<Format> format;
  std::optional<std::vector<Count>> x0;
  std::uint64_t event_cap = 1'000'000'000;
  std::vector<std::string> argv;  // echoed into metadata
};

enum class Check { kLumpability, kMasterEq, kDrift, kOracle, kMoments };

/// Trajectory (trajectories == 1) or ensemble CSV plus a .meta.json sidecar.
int cmd_simulate(const RunConfig& run, const NetworkConfig& config,
                 std::ostream& out, std::ostream& err);

/// Runs one verification and writes its JSON report. Exit 0 iff passed.
int cmd_verify(const RunConfig& run, const NetworkConfig& config, Check which,
               std::ostream& out, std::ostream& err);

/// Volume sweep of the primed parameters in the config's volume block.
int cmd_sweep(const RunConfig& run, const NetworkConfig& config,
              std::ostream& out, std::ostream& err);

/// Parses arguments (argv[0] excluded) and dispatches. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// Initial state used when --x0 is absent: round(lambda_i / delta_i).
State default_initial_state(const ReactionNetwork& net);

/// Metadata sidecar path for a data file: "<path>.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& data);

}  // namespace autocat::cli

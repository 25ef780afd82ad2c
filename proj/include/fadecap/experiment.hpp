#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fadecap/capacity.hpp"
#include "fadecap/channel.hpp"

namespace fadecap {

/// Config-file rejection with the 1-based line the problem was found on
/// (line 0 marks file-level problems such as missing keys).
struct ConfigError : std::runtime_error {
  ConfigError(int line_, const std::string& message)
      : std::runtime_error(message), line(line_) {}
  int line;
};

struct ExperimentConfig {
  std::string kind;
  ChannelParams params;
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t trials = 10000;
  std::filesystem::path out_dir = ".";

  // capacity
  std::vector<double> snr_grid;
  SolverOptions solver;

  // infodensity-variance / lag-decay
  std::vector<std::size_t> block_lengths;
  std::size_t max_lag = 8;
  double q_trace = 0.0;  // 0 defaults to the power budget p

  // tail
  std::size_t tail_dim = 2;
  double tail_rho = 1.0;
  std::vector<std::size_t> n_grid;
  std::vector<double> delta_over_rho_grid;

  // feinstein
  std::vector<double> rate_grid;
  double gamma = 0.05;
  double margin_beta = 0.25;
  std::size_t error_trials = 0;  // 0 defaults to trials

  // raw key/value lines in file order, echoed into the manifest
  std::vector<std::pair<std::string, std::string>> raw;
};

bool is_known_kind(const std::string& kind);

/// Parses a flat key = value config file for the given experiment kind.
/// Unknown keys, malformed values, and out-of-range settings throw
/// ConfigError with the offending line number.
ExperimentConfig parse_config(const std::filesystem::path& path, const std::string& kind);

/// Runs one experiment: writes <kind>.csv and <kind>.manifest.json under
/// config.out_dir (except selftest, which only prints check lines). The CSV
/// bytes are a pure function of the config contents and seed; thread count
/// and wall time never leak into them. Returns a process exit status.
int run_experiment(const ExperimentConfig& config);

/// Property battery over the library invariants; prints one line per check
/// to `out` and returns the number of failures.
int run_selftest(std::uint64_t seed, int threads, std::ostream& out);

}  // namespace fadecap

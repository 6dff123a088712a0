#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ici/tolerances.h"

namespace ici::cli {

inline constexpr const char* kVersion = "ici 1.0.0";

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 1;
inline constexpr int kNumericalFailure = 2;
inline constexpr int kUnstable = 3;

struct RunConfig {
  std::string command;  // analyze | synthesize | simulate | cycle | normmin | example
  int example_id = 0;
  std::string system_path;
  std::string signal_path;
  std::string initial_path;
  std::optional<double> eta;
  double t_end = 60.0;
  double sample_dt = 0.01;
  std::string output_dir = ".";
  std::optional<std::size_t> circle;
  std::vector<std::pair<std::string, double>> tol_overrides;
  std::vector<int> k_list;
  double resolution = 0.01;
  std::optional<double> eta_max;
  std::size_t grid_points = 200;
  std::size_t orbit_samples = 400;
  /// Norm-min policy step; defaults to 1e-3 / max_i |A_i|_2.
  std::optional<double> policy_step;
};

/// Parses `--tol NAME=VALUE` overrides into `tol`. Throws InvalidArgument on
/// unknown names or malformed values.
Tolerances resolve_tolerances(const RunConfig& config);

/// Executes one command, writing its artifacts under config.output_dir.
/// Diagnostics go to `log`. Returns one of the exit statuses above.
int run(const RunConfig& config, std::ostream& log);

/// Parses argv with CLI11 and runs. Used by the `ici` executable.
int main_entry(int argc, char** argv);

}  // namespace ici::cli

#pragma once

// File formats: JSON system/signal specifications, JSON reports and CSV
// traces. Subsystem indices are 1-based in every format.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ici/model.h"
#include "ici/signals.h"
#include "ici/simulate.h"
#include "ici/stability.h"
#include "ici/synthesis.h"

namespace ici {

using Json = nlohmann::ordered_json;

/// {"n": 2, "subsystems": [{"A": [[...], ...], "b": [...]}, ...]}; a missing
/// "b" is the zero vector. Throws InvalidArgument on malformed input.
SwitchedSystem system_from_json(const Json& j);
Json to_json(const SwitchedSystem& sys);

/// A signal file: segments plus an optional scale factor (default 1).
struct SignalSpec {
  PeriodicSignal segments;
  double eta = 1.0;

  /// The segments scaled by eta.
  PeriodicSignal signal() const { return scale(segments, eta); }
};

/// {"segments": [{"index": 1, "duration": 2.0}, ...], "eta": 1.0}
SignalSpec signal_from_json(const Json& j);
Json to_json(const SignalSpec& spec);

/// Either {"initial_conditions": [[...], ...]} or a bare array of states.
std::vector<Vector> initial_conditions_from_json(const Json& j, Eigen::Index n);

/// k points evenly spaced on the unit circle in the first two coordinates.
std::vector<Vector> circle_points(std::size_t k, Eigen::Index n);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const StabilityReport& report);
Json to_json(const DwellBoundResult& result);
Json to_json(const CombinationResult& result);
Json to_json(const EtaSearchResult& result);
/// Cycle summary; the orbit itself goes to CSV.
Json to_json(const Cycle& cycle);

/// Reads and parses a JSON file; parse errors become InvalidArgument.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// "t,x1,...,xn,active", one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// "t,x1,...,xn".
void write_orbit_csv(std::ostream& out, const std::vector<std::pair<double, Vector>>& orbit);
/// "eta,spectral_radius".
void write_eta_grid_csv(std::ostream& out, const EtaSearchResult& result);

}  // namespace ici

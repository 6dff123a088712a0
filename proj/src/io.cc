#include "ici/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ici/errors.h"

namespace ici {

namespace {

double number_at(const Json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite number");
  return v;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number_at(j[i], what);
  }
  return v;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument(std::string(what) + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument(std::string(what) + ": rows have inconsistent lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = number_at(row[static_cast<std::size_t>(c)], what);
    }
  }
  return m;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

SwitchedSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("subsystems") || !j["subsystems"].is_array()) {
    throw InvalidArgument("system: expected an object with a \"subsystems\" array");
  }
  std::vector<SubSystem> subsystems;
  for (const Json& s : j["subsystems"]) {
    if (!s.is_object() || !s.contains("A")) {
      throw InvalidArgument("system: every subsystem needs an \"A\" matrix");
    }
    Matrix a = matrix_from_json(s["A"], "system.A");
    if (s.contains("b") && !s["b"].is_null()) {
      subsystems.emplace_back(std::move(a), vector_from_json(s["b"], "system.b"));
    } else {
      subsystems.emplace_back(std::move(a));
    }
  }
  SwitchedSystem sys(std::move(subsystems));
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long>() != sys.dim()) {
      throw InvalidArgument("system: \"n\" does not match the subsystem dimension");
    }
  }
  return sys;
}

Json to_json(const SwitchedSystem& sys) {
  Json out;
  out["n"] = sys.dim();
  Json subs = Json::array();
  for (const auto& s : sys.subsystems()) {
    subs.push_back(Json{{"A", to_json(s.A)}, {"b", to_json(s.b)}});
  }
  out["subsystems"] = std::move(subs);
  return out;
}

SignalSpec signal_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
    throw InvalidArgument("signal: expected an object with a \"segments\" array");
  }
  std::vector<Segment> segments;
  for (const Json& s : j["segments"]) {
    if (!s.is_object() || !s.contains("index") || !s.contains("duration")) {
      throw InvalidArgument("signal: every segment needs \"index\" and \"duration\"");
    }
    if (!s["index"].is_number_integer() || s["index"].get<long>() < 1) {
      throw InvalidArgument("signal: segment index must be an integer >= 1");
    }
    segments.push_back({static_cast<std::size_t>(s["index"].get<long>() - 1),
                        number_at(s["duration"], "signal.duration")});
  }
  double eta = 1.0;
  if (j.contains("eta")) {
    eta = number_at(j["eta"], "signal.eta");
    if (!(eta > 0.0)) throw InvalidArgument("signal: eta must be positive");
  }
  return SignalSpec{PeriodicSignal(std::move(segments)), eta};
}

Json to_json(const SignalSpec& spec) {
  Json segs = Json::array();
  for (const auto& s : spec.segments.segments()) {
    segs.push_back(Json{{"index", s.index + 1}, {"duration", s.duration}});
  }
  return Json{{"segments", std::move(segs)}, {"eta", spec.eta}};
}

std::vector<Vector> initial_conditions_from_json(const Json& j, Eigen::Index n) {
  const Json& list = j.is_object() && j.contains("initial_conditions") ? j["initial_conditions"] : j;
  if (!list.is_array() || list.empty()) {
    throw InvalidArgument("initial conditions: expected a nonempty array of states");
  }
  std::vector<Vector> out;
  for (const Json& x : list) {
    Vector v = vector_from_json(x, "initial_conditions");
    if (v.size() != n) {
      throw InvalidArgument("initial conditions: state has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(n));
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> circle_points(std::size_t k, Eigen::Index n) {
  if (k == 0) throw InvalidArgument("circle: need at least one point");
  std::vector<Vector> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    Vector x = Vector::Zero(n);
    x(0) = std::cos(angle);
    if (n > 1) x(1) = std::sin(angle);
    out.push_back(std::move(x));
  }
  return out;
}

Json to_json(const StabilityReport& report) {
  return Json{{"eta", report.eta},
              {"period", report.period},
              {"spectral_radius", report.spectral_radius},
              {"determinant", report.determinant},
              {"det_oracle", report.det_oracle},
              {"is_stable", report.is_stable},
              {"norm_condition_holds", report.norm_condition_holds},
              {"monodromy", to_json(report.monodromy)}};
}

Json to_json(const DwellBoundResult& result) {
  Json terms = Json::array();
  for (const auto& t : result.terms) {
    terms.push_back(Json{{"k", t.k}, {"lhs", t.lhs}, {"rhs", t.rhs}});
  }
  return Json{{"holds", result.holds}, {"terms", std::move(terms)}};
}

Json to_json(const CombinationResult& result) {
  return Json{{"weights", result.weights.alpha()},
              {"abscissa", result.abscissa},
              {"found", result.found},
              {"evaluations", result.evaluations}};
}

Json to_json(const EtaSearchResult& result) {
  Json grid = Json::array();
  for (const auto& s : result.grid) {
    grid.push_back(Json{{"eta", s.eta},
                        {"spectral_radius", std::isfinite(s.spectral_radius)
                                                ? Json(s.spectral_radius)
                                                : Json(nullptr)}});
  }
  return Json{{"eta_star", result.eta_star},
              {"eta_star_note", "numerical estimate of the dwell-time bound"},
              {"stable_prefix", result.stable_prefix},
              {"grid", std::move(grid)}};
}

Json to_json(const Cycle& cycle) {
  Json out{{"fixed_point", to_json(cycle.fixed_point)},
           {"period", cycle.period},
           {"map_spectral_radius", cycle.map_spectral_radius},
           {"orbit_samples", cycle.orbit.size()}};
  out["practical_radius"] = cycle.practical_radius ? Json(*cycle.practical_radius) : Json(nullptr);
  out["average_equilibrium"] =
      cycle.average_equilibrium ? to_json(*cycle.average_equilibrium) : Json(nullptr);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().x.size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
  out << ",active\n";
  for (const auto& s : traj.samples) {
    out << format_number(s.t);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(s.x(i));
    out << ',' << s.active + 1 << '\n';
  }
}

void write_orbit_csv(std::ostream& out, const std::vector<std::pair<double, Vector>>& orbit) {
  const Eigen::Index n = orbit.empty() ? 0 : orbit.front().second.size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
  out << '\n';
  for (const auto& [t, x] : orbit) {
    out << format_number(t);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(x(i));
    out << '\n';
  }
}

void write_eta_grid_csv(std::ostream& out, const EtaSearchResult& result) {
  out << "eta,spectral_radius\n";
  for (const auto& s : result.grid) {
    out << format_number(s.eta) << ',' << format_number(s.spectral_radius) << '\n';
  }
}

}  // namespace ici

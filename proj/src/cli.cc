#include "ici/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ici/errors.h"
#include "ici/io.h"
#include "ici/model.h"
#include "ici/presets.h"
#include "ici/signals.h"
#include "ici/simulate.h"
#include "ici/stability.h"
#include "ici/synthesis.h"

namespace ici::cli {

namespace {

namespace fs = std::filesystem;

Json config_to_json(const RunConfig& c, const Tolerances& tol) {
  Json j;
  j["command"] = c.command;
  if (c.command == "example") j["example"] = c.example_id;
  j["system"] = c.system_path;
  j["signal"] = c.signal_path;
  j["initial"] = c.initial_path;
  j["eta"] = c.eta ? Json(*c.eta) : Json(nullptr);
  j["t_end"] = c.t_end;
  j["dt"] = c.sample_dt;
  j["circle"] = c.circle ? Json(*c.circle) : Json(nullptr);
  j["k_list"] = c.k_list;
  j["resolution"] = c.resolution;
  j["eta_max"] = c.eta_max ? Json(*c.eta_max) : Json(nullptr);
  j["grid_points"] = c.grid_points;
  j["orbit_samples"] = c.orbit_samples;
  j["policy_step"] = c.policy_step ? Json(*c.policy_step) : Json(nullptr);
  j["tolerances"] = Json{{"equilibrium", tol.equilibrium},
                         {"cycle", tol.cycle},
                         {"refine", tol.refine},
                         {"divergence_guard", tol.divergence_guard},
                         {"pivot", tol.pivot},
                         {"qr_sweeps_per_row", tol.qr_sweeps_per_row}};
  return j;
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& log)
      : config_(config), log_(log), tol_(resolve_tolerances(config)) {
    if (config_.k_list.empty()) config_.k_list = default_k_list();
    fs::create_directories(config_.output_dir);
  }

  int dispatch() {
    const auto& cmd = config_.command;
    if (cmd == "analyze") return analyze(load_system(), load_signal());
    if (cmd == "synthesize") return synthesize(load_system());
    if (cmd == "simulate") {
      const auto sys = load_system();
      return simulate_all(sys, load_signal(), initial_states(sys.dim()));
    }
    if (cmd == "cycle") return cycle(load_system(), load_signal());
    if (cmd == "normmin") return normmin(load_system());
    if (cmd == "example") return example();
    throw InvalidArgument("unknown command \"" + cmd + "\"");
  }

 private:
  std::string path(const std::string& name) const {
    return (fs::path(config_.output_dir) / name).string();
  }

  Json report_header() const {
    return Json{{"version", kVersion}, {"config", config_to_json(config_, tol_)}};
  }

  SwitchedSystem load_system() const {
    if (config_.system_path.empty()) throw InvalidArgument("--system is required");
    return system_from_json(read_json_file(config_.system_path));
  }

  // The command-line eta, when given, replaces the file's.
  PeriodicSignal load_signal() const {
    if (config_.signal_path.empty()) throw InvalidArgument("--signal is required");
    SignalSpec spec = signal_from_json(read_json_file(config_.signal_path));
    if (config_.eta) spec.eta = *config_.eta;
    return spec.signal();
  }

  double effective_eta() const {
    if (config_.eta) return *config_.eta;
    if (!config_.signal_path.empty()) {
      return signal_from_json(read_json_file(config_.signal_path)).eta;
    }
    return 1.0;
  }

  std::vector<Vector> initial_states(Eigen::Index n) const {
    if (!config_.initial_path.empty()) {
      return initial_conditions_from_json(read_json_file(config_.initial_path), n);
    }
    return circle_points(config_.circle.value_or(8), n);
  }

  void write_csv(const std::string& name, const Trajectory& traj) const {
    std::ofstream out(path(name));
    if (!out) throw InvalidArgument("cannot write " + path(name));
    write_trajectory_csv(out, traj);
  }

  Json analysis_json(const SwitchedSystem& sys, const PeriodicSignal& sig,
                     const StabilityReport& report) const {
    Json out = report_header();
    out["report"] = to_json(report);

    const Weights w = activation_fractions(sig, sys.size());
    out["activation_fractions"] = w.alpha();
    out["min_dwell"] = sig.min_dwell();
    out["mean_dwell"] = sig.mean_dwell();
    const SubSystem avg = average_system(sys, w);
    out["average_abscissa"] = spectral_abscissa(avg.A, tol_);

    const Matrix c2 = bch_terms(sys, sig).second;
    out["bch_c2"] = to_json(c2);
    out["average_error_bound"] = average_error_bound(avg.A, c2, 1.0, sig.period());
    out["average_deviation"] =
        operator_norm_2(report.monodromy - mat_exp(sig.period() * avg.A));
    // The dwell-time bound is stated for the signal built from the weights in
    // subsystem order, so it is evaluated for that signal at unit scale.
    out["dwell_bound"] = to_json(dwell_bound_evaluate(sys.linear_part(), w, 1.0, config_.k_list));

    out["common_equilibrium"] = nullptr;
    out["average_equilibrium"] = nullptr;
    try {
      if (auto eq = common_equilibrium(sys, tol_)) out["common_equilibrium"] = to_json(*eq);
    } catch (const NoEquilibriumError& e) {
      log_ << "note: " << e.what() << '\n';
    }
    try {
      out["average_equilibrium"] = to_json(equilibrium(avg, tol_));
    } catch (const NoEquilibriumError& e) {
      log_ << "note: " << e.what() << '\n';
    }
    return out;
  }

  int analyze(const SwitchedSystem& sys, const PeriodicSignal& sig) {
    const double eta = effective_eta();
    const StabilityReport report = is_ici_stable(sys, sig, eta, tol_);
    write_json_file(path("analysis.json"), analysis_json(sys, sig, report));
    log_ << "spectral radius " << format_number(report.spectral_radius) << " -> "
         << (report.is_stable ? "stable" : "unstable") << '\n';
    return report.is_stable ? kOk : kUnstable;
  }

  int synthesize(const SwitchedSystem& sys) {
    const auto matrices = sys.matrices();
    const CombinationResult combo =
        find_stable_combination(matrices, config_.resolution, /*refine=*/true, tol_);
    Json combo_json = report_header();
    combo_json["result"] = to_json(combo);
    write_json_file(path("combination.json"), combo_json);
    if (!combo.found) {
      log_ << "no stable convex combination found (best abscissa "
           << format_number(combo.abscissa) << ")\n";
      return kUnstable;
    }
    const double eta_max = config_.eta_max.value_or(default_eta_max(sys, combo.weights));
    const EtaSearchResult search =
        max_stable_eta(sys.linear_part(), combo.weights, eta_max, config_.grid_points, tol_);
    Json search_json = report_header();
    search_json["weights"] = combo.weights.alpha();
    search_json["period"] = combo.weights.period();
    search_json["eta_max"] = eta_max;
    search_json["result"] = to_json(search);
    write_json_file(path("eta_search.json"), search_json);
    std::ofstream grid(path("eta_grid.csv"));
    write_eta_grid_csv(grid, search);
    log_ << "stable combination found; eta* = " << format_number(search.eta_star) << '\n';
    return kOk;
  }

  int simulate_all(const SwitchedSystem& sys, const PeriodicSignal& sig,
                   const std::vector<Vector>& states) {
    Json summary = report_header();
    Json runs = Json::array();
    bool diverged = false;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const Trajectory traj =
          simulate(sys, sig, states[k], config_.t_end, config_.sample_dt, tol_);
      const std::string name = "trajectory_" + std::to_string(k + 1) + ".csv";
      write_csv(name, traj);
      Json run{{"file", name}, {"initial", to_json(states[k])}};
      if (!traj.samples.empty()) run["final"] = to_json(traj.back().x);
      run["escape_time"] = traj.escape_time ? Json(*traj.escape_time) : Json(nullptr);
      diverged = diverged || traj.diverged();
      runs.push_back(std::move(run));
    }
    summary["runs"] = std::move(runs);
    write_json_file(path("simulate.json"), summary);
    if (diverged) log_ << "divergence detected\n";
    return diverged ? kUnstable : kOk;
  }

  int cycle(const SwitchedSystem& sys, const PeriodicSignal& sig) {
    Json out = report_header();
    try {
      const Cycle c = limit_cycle(sys, sig, config_.orbit_samples, tol_);
      out["attracting"] = true;
      out["cycle"] = to_json(c);
      write_json_file(path("cycle.json"), out);
      std::ofstream orbit(path("orbit.csv"));
      write_orbit_csv(orbit, c.orbit);
      return kOk;
    } catch (const InstabilityError& e) {
      out["attracting"] = false;
      out["map_spectral_radius"] = spectral_radius(poincare_map(sys, sig).M, tol_);
      out["error"] = e.what();
      write_json_file(path("cycle.json"), out);
      log_ << e.what() << '\n';
      return kUnstable;
    }
  }

  // 1e-3 of the fastest subsystem time scale 1 / max_i |A_i|_2.
  double default_policy_step(const SwitchedSystem& sys) const {
    double fastest = 0.0;
    for (const auto& s : sys.subsystems()) fastest = std::max(fastest, operator_norm_2(s.A));
    return fastest > 0.0 ? 1e-3 / fastest : 1e-3;
  }

  // Keeps the first sample in each window of width dt, every switch, and the
  // final sample, so CSV size follows the sample spacing, not the policy step.
  static Trajectory thin(const Trajectory& traj, double dt) {
    Trajectory out;
    out.provenance = traj.provenance;
    out.escape_time = traj.escape_time;
    double next = 0.0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto& s = traj.samples[i];
      const bool last = i + 1 == traj.samples.size();
      const bool switched = i > 0 && s.active != traj.samples[i - 1].active;
      if (last || switched || s.t >= next - 1e-12 * dt) {
        out.samples.push_back(s);
        next = (std::floor(s.t / dt + 1e-9) + 1.0) * dt;
      }
    }
    return out;
  }

  int normmin(const SwitchedSystem& sys) {
    const double step = config_.policy_step.value_or(default_policy_step(sys));
    const NormMinPolicy policy(step);
    const auto states = initial_states(sys.dim());
    Json summary = report_header();
    Json runs = Json::array();
    bool diverged = false;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const Trajectory traj = simulate_norm_min(sys, states[k], config_.t_end, policy, tol_);
      const std::string name = "normmin_" + std::to_string(k + 1) + ".csv";
      write_csv(name, thin(traj, config_.sample_dt));
      std::size_t switches = 0;
      for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (traj.samples[i].active != traj.samples[i - 1].active) ++switches;
      }
      Json run{{"file", name}, {"initial", to_json(states[k])}, {"switches", switches}};
      if (!traj.samples.empty()) run["final"] = to_json(traj.back().x);
      run["escape_time"] = traj.escape_time ? Json(*traj.escape_time) : Json(nullptr);
      diverged = diverged || traj.diverged();
      runs.push_back(std::move(run));
    }
    summary["policy_step"] = step;
    summary["runs"] = std::move(runs);
    write_json_file(path("normmin.json"), summary);
    return diverged ? kUnstable : kOk;
  }

  int example() {
    const SwitchedSystem sys = presets::example(config_.example_id);
    const double eta = config_.eta.value_or(config_.example_id == 1 ? 1.1 : 0.5);
    const SignalSpec spec{example_signal(1.0), eta};

    config_.system_path = path("system.json");
    config_.signal_path = path("signal.json");
    config_.eta = eta;
    write_json_file(config_.system_path, to_json(sys));
    write_json_file(config_.signal_path, to_json(spec));

    const PeriodicSignal sig = spec.signal();
    int status = analyze(sys, sig);
    if (config_.example_id == 2) {
      status = std::max(status, cycle(sys, sig));
    }
    const int sim_status = simulate_all(sys, sig, initial_states(sys.dim()));
    return std::max(status, sim_status);
  }

  RunConfig config_;
  std::ostream& log_;
  Tolerances tol_;
};

}  // namespace

Tolerances resolve_tolerances(const RunConfig& config) {
  Tolerances tol;
  for (const auto& [name, value] : config.tol_overrides) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvalidArgument("--tol " + name + ": value must be positive");
    }
    if (!tol.set(name, value)) throw InvalidArgument("--tol: unknown tolerance \"" + name + "\"");
  }
  return tol;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    Runner runner(config, log);
    return runner.dispatch();
  } catch (const InstabilityError& e) {
    log << "error: " << e.what() << '\n';
    return kUnstable;
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NumericalFailure& e) {
    log << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

namespace {

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || k <= 0) {
      throw InvalidArgument("--k-list: \"" + item + "\" is not a positive integer");
    }
    ks.push_back(k);
  }
  if (ks.empty()) throw InvalidArgument("--k-list: empty list");
  return ks;
}

std::pair<std::string, double> parse_tol(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("--tol expects NAME=VALUE, got \"" + text + "\"");
  }
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw InvalidArgument("--tol " + text.substr(0, eq) + ": \"" + value + "\" is not a number");
  }
  return {text.substr(0, eq), v};
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Periodic stabilisation of switched affine systems"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::optional<double> eta;
  std::optional<std::size_t> circle;
  std::optional<double> eta_max;
  std::optional<double> policy_step;
  std::vector<std::string> tols;
  std::string k_list;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
    sub->add_option("--tol", tols, "Tolerance override NAME=VALUE (repeatable)");
  };
  auto system_opt = [&](CLI::App* sub) {
    sub->add_option("--system", config.system_path, "System JSON")->required();
  };
  auto signal_opts = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--signal", config.signal_path, "Signal JSON");
    if (required) opt->required();
    sub->add_option("--eta", eta, "Signal scale (overrides the file's eta)")
        ->check(CLI::PositiveNumber);
  };
  auto sim_opts = [&](CLI::App* sub) {
    sub->add_option("--t-end", config.t_end, "Simulation horizon")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--dt", config.sample_dt, "Sample spacing")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* c = sub->add_option("--circle", circle, "Initial states: K points on the unit circle")
                  ->check(CLI::PositiveNumber);
    sub->add_option("--initial", config.initial_path, "Initial states JSON")->excludes(c);
  };

  auto* analyze = app.add_subcommand("analyze", "Stability of a periodic signal");
  system_opt(analyze);
  signal_opts(analyze, true);
  analyze->add_option("--k-list", k_list, "Comma-separated k values for the dwell-time bound");
  common(analyze);

  auto* synth = app.add_subcommand("synthesize", "Stable combination and eta range");
  system_opt(synth);
  synth->add_option("--resolution", config.resolution, "Simplex grid step")
      ->check(CLI::Range(1e-6, 1.0))
      ->capture_default_str();
  synth->add_option("--eta-max", eta_max, "Largest eta scanned")->check(CLI::PositiveNumber);
  synth->add_option("--grid", config.grid_points, "Eta grid points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  common(synth);

  auto* sim = app.add_subcommand("simulate", "Trajectories under a periodic signal");
  system_opt(sim);
  signal_opts(sim, true);
  sim_opts(sim);
  common(sim);

  auto* cyc = app.add_subcommand("cycle", "Limit cycle of the one-period map");
  system_opt(cyc);
  signal_opts(cyc, true);
  cyc->add_option("--samples", config.orbit_samples, "Orbit samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  common(cyc);

  auto* nm = app.add_subcommand("normmin", "Closed loop under the norm-minimising policy");
  system_opt(nm);
  sim_opts(nm);
  nm->add_option("--step", policy_step, "Policy step (default 1e-3 / max |A_i|)")
      ->check(CLI::PositiveNumber);
  common(nm);

  auto* ex = app.add_subcommand("example", "Run a bundled example (1 or 2)");
  ex->add_option("id", config.example_id, "Example number")->required()->check(CLI::Range(1, 2));
  ex->add_option("--eta", eta, "Signal scale")->check(CLI::PositiveNumber);
  sim_opts(ex);
  ex->add_option("--samples", config.orbit_samples, "Orbit samples")->capture_default_str();
  common(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    for (const auto& t : tols) config.tol_overrides.push_back(parse_tol(t));
    if (!k_list.empty()) config.k_list = parse_k_list(k_list);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  config.eta = eta;
  config.circle = circle;
  config.eta_max = eta_max;
  config.policy_step = policy_step;
  for (const auto* sub : app.get_subcommands()) config.command = sub->get_name();
  return run(config, std::cerr);
}

}  // namespace ici::cli

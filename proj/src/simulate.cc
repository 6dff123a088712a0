#include "ici/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ici/errors.h"

namespace ici {

namespace {

void check_state(const SwitchedSystem& sys, const Vector& x0, const char* what) {
  if (x0.size() != sys.dim()) {
    throw DimensionError(std::string(what) + ": initial state has length " +
                         std::to_string(x0.size()) + ", system dimension is " +
                         std::to_string(sys.dim()));
  }
  if (!x0.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite initial state");
}

bool escaped(const Vector& x, const Tolerances& tol) {
  return !x.allFinite() || x.norm() > tol.divergence_guard;
}

}  // namespace

AffineMap AffineMap::after(const AffineMap& first) const {
  return AffineMap{M * first.M, M * first.v + v};
}

AffineMap AffineMap::identity(Eigen::Index n) {
  return AffineMap{Matrix::Identity(n, n), Vector::Zero(n)};
}

AffineMap segment_map(const SubSystem& sub, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("segment_map: tau must be finite and nonnegative");
  }
  const auto n = sub.dim();
  Matrix augmented = Matrix::Zero(n + 1, n + 1);
  augmented.topLeftCorner(n, n) = sub.A * tau;
  augmented.topRightCorner(n, 1) = sub.b * tau;
  const Matrix flow = mat_exp(augmented);
  return AffineMap{flow.topLeftCorner(n, n), flow.topRightCorner(n, 1)};
}

Vector segment_step(const SubSystem& sub, const Vector& x, double tau) {
  return segment_map(sub, tau)(x);
}

Trajectory simulate(const SwitchedSystem& sys, const PeriodicSignal& sig, const Vector& x0,
                    double t_end, double sample_dt, const Tolerances& tol) {
  check_state(sys, x0, "simulate");
  sig.check_indices(sys.size());
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("simulate: t_end must be positive");
  }
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
    throw InvalidArgument("simulate: sample_dt must be positive");
  }

  std::vector<double> sample_times;
  const auto last_k = static_cast<std::size_t>(std::floor(t_end / sample_dt + 1e-9));
  sample_times.reserve(last_k + 2);
  for (std::size_t k = 0; k <= last_k; ++k) {
    sample_times.push_back(std::min(static_cast<double>(k) * sample_dt, t_end));
  }
  if (sample_times.back() < t_end * (1.0 - 1e-12)) sample_times.push_back(t_end);

  std::vector<AffineMap> maps;
  std::vector<double> offsets{0.0};
  for (const auto& seg : sig.segments()) {
    maps.push_back(segment_map(sys[seg.index], seg.duration));
    offsets.push_back(offsets.back() + seg.duration);
  }
  const double period = sig.period();

  Trajectory traj;
  traj.provenance = Provenance::kPeriodic;
  traj.samples.reserve(sample_times.size());
  Vector x = x0;
  std::size_t next = 0;
  for (std::size_t p = 0; next < sample_times.size(); ++p) {
    const double base = static_cast<double>(p) * period;
    for (std::size_t j = 0; j < sig.size() && next < sample_times.size(); ++j) {
      const double t0 = base + offsets[j];
      const double t1 = base + offsets[j + 1];
      const SubSystem& sub = sys[sig[j].index];
      while (next < sample_times.size() && sample_times[next] < t1) {
        const double ts = sample_times[next];
        const double tau = std::max(0.0, ts - t0);
        Vector xs = tau > 0.0 ? segment_step(sub, x, tau) : x;
        if (escaped(xs, tol)) {
          traj.escape_time = ts;
          return traj;
        }
        traj.samples.push_back({ts, std::move(xs), sig[j].index});
        ++next;
      }
      if (next == sample_times.size()) break;
      x = maps[j](x);
      if (escaped(x, tol)) {
        traj.escape_time = t1;
        return traj;
      }
    }
  }
  return traj;
}

std::size_t norm_min_selection(const SwitchedSystem& sys, const Vector& x) {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double value = x.dot(sys[i].A * x + sys[i].b);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

Trajectory simulate_norm_min(const SwitchedSystem& sys, const Vector& x0, double t_end,
                             const NormMinPolicy& policy, const Tolerances& tol) {
  check_state(sys, x0, "simulate_norm_min");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("simulate_norm_min: t_end must be positive");
  }
  const double h = policy.step;
  std::vector<AffineMap> maps;
  maps.reserve(sys.size());
  for (const auto& sub : sys.subsystems()) maps.push_back(segment_map(sub, h));

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  Trajectory traj;
  traj.provenance = Provenance::kNormMin;
  traj.samples.reserve(steps + 1);
  Vector x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const std::size_t i = norm_min_selection(sys, x);
    traj.samples.push_back({t, x, i});
    const double remaining = t_end - t;
    if (remaining >= h * (1.0 - 1e-9)) {
      x = maps[i](x);
    } else {
      x = segment_step(sys[i], x, remaining);
    }
    if (escaped(x, tol)) {
      traj.escape_time = std::min(t + h, t_end);
      return traj;
    }
  }
  traj.samples.push_back({t_end, x, norm_min_selection(sys, x)});
  return traj;
}

AffineMap poincare_map(const SwitchedSystem& sys, const PeriodicSignal& sig) {
  sig.check_indices(sys.size());
  AffineMap map = AffineMap::identity(sys.dim());
  for (const auto& seg : sig.segments()) {
    map = segment_map(sys[seg.index], seg.duration).after(map);
  }
  return map;
}

Cycle limit_cycle(const SwitchedSystem& sys, const PeriodicSignal& sig,
                  std::size_t orbit_samples, const Tolerances& tol) {
  if (orbit_samples == 0) throw InvalidArgument("limit_cycle: need at least one orbit sample");
  const AffineMap map = poincare_map(sys, sig);

  Cycle cycle;
  cycle.period = sig.period();
  cycle.map_spectral_radius = spectral_radius(map.M, tol);
  if (!(cycle.map_spectral_radius < 1.0)) {
    throw InstabilityError("limit_cycle: Poincare map is not a contraction (spectral radius " +
                           std::to_string(cycle.map_spectral_radius) + ")");
  }
  const Matrix i_minus_m = Matrix::Identity(sys.dim(), sys.dim()) - map.M;
  try {
    cycle.fixed_point = solve(i_minus_m, map.v, tol);
  } catch (const SingularMatrixError& e) {
    throw DegenerateCycleError(std::string("limit_cycle: I - M is singular; ") + e.what());
  }
  const double residual = (map(cycle.fixed_point) - cycle.fixed_point).norm();
  if (residual > tol.cycle * (1.0 + cycle.fixed_point.norm())) {
    throw DegenerateCycleError("limit_cycle: fixed-point residual " + std::to_string(residual) +
                               " exceeds tolerance");
  }

  const Trajectory orbit = simulate(sys, sig, cycle.fixed_point, cycle.period,
                                    cycle.period / static_cast<double>(orbit_samples), tol);
  cycle.orbit.reserve(orbit.samples.size());
  for (const auto& s : orbit.samples) cycle.orbit.emplace_back(s.t, s.x);

  try {
    const SubSystem avg = average_system(sys, activation_fractions(sig, sys.size()));
    const Vector eq = equilibrium(avg, tol);
    double radius = 0.0;
    for (const auto& [t, x] : cycle.orbit) radius = std::max(radius, (x - eq).norm());
    cycle.practical_radius = radius;
    cycle.average_equilibrium = eq;
  } catch (const NoEquilibriumError&) {
    // No unique average equilibrium: radius stays unset.
  }
  return cycle;
}

double distance_to_orbit(const Vector& x,
                         const std::vector<std::pair<double, Vector>>& orbit) {
  if (orbit.empty()) throw InvalidArgument("distance_to_orbit: empty orbit");
  double best = (x - orbit.front().second).norm();
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    const Vector& a = orbit[i - 1].second;
    const Vector ab = orbit[i].second - a;
    const double len2 = ab.squaredNorm();
    double s = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, (x - (a + s * ab)).norm());
  }
  return best;
}

}  // namespace ici

#pragma once

// Exact piecewise simulation of switched affine systems, one-period Poincare
// maps and the limit cycles they generate.

#include <cstddef>
#include <optional>
#include <vector>

#include "ici/linalg.h"
#include "ici/model.h"
#include "ici/signals.h"
#include "ici/tolerances.h"

namespace ici {

/// x -> M x + v.
struct AffineMap {
  Matrix M;
  Vector v;

  Vector operator()(const Vector& x) const { return M * x + v; }
  /// The map "this after first": x -> M (first.M x + first.v) + v.
  AffineMap after(const AffineMap& first) const;
  static AffineMap identity(Eigen::Index n);
};

/// Exact flow of x' = A x + b over time tau, read off the exponential of the
/// augmented matrix [[A, b], [0, 0]] tau.
AffineMap segment_map(const SubSystem& sub, double tau);

Vector segment_step(const SubSystem& sub, const Vector& x, double tau);

enum class Provenance { kPeriodic, kNormMin };

struct Trajectory {
  struct Sample {
    double t;
    Vector x;
    std::size_t active;  // 0-based subsystem index
  };

  std::vector<Sample> samples;
  Provenance provenance = Provenance::kPeriodic;
  /// Set when |x| crossed the divergence guard; the run stops there.
  std::optional<double> escape_time;

  bool diverged() const { return escape_time.has_value(); }
  const Sample& back() const { return samples.back(); }
};

/// Samples at 0, dt, 2 dt, ... and t_end. Each sample is propagated from the
/// most recent switching instant, and switching instants are propagated with
/// whole-segment maps, so no step-size error accumulates.
Trajectory simulate(const SwitchedSystem& sys, const PeriodicSignal& sig, const Vector& x0,
                    double t_end, double sample_dt, const Tolerances& tol = {});

/// Closed loop under the sampled norm-minimising policy. One sample per policy
/// step records the state at the start of the step and the subsystem chosen
/// there; a final sample is recorded at t_end.
Trajectory simulate_norm_min(const SwitchedSystem& sys, const Vector& x0, double t_end,
                             const NormMinPolicy& policy, const Tolerances& tol = {});

/// Index of the first subsystem minimising x^T (A_i x + b_i).
std::size_t norm_min_selection(const SwitchedSystem& sys, const Vector& x);

/// x(T) = M x(0) + v over one period of `sig`.
AffineMap poincare_map(const SwitchedSystem& sys, const PeriodicSignal& sig);

struct Cycle {
  Vector fixed_point;
  double period = 0.0;
  std::vector<std::pair<double, Vector>> orbit;  // t in [0, period], closing
  /// Max distance from the orbit to the equilibrium of the average system;
  /// absent when that system has no unique equilibrium.
  std::optional<double> practical_radius;
  std::optional<Vector> average_equilibrium;
  double map_spectral_radius = 0.0;
};

/// Attracting periodic orbit x* = (I - M)^{-1} v of the Poincare map, sampled
/// at `orbit_samples` evenly spaced times. Throws InstabilityError when
/// rho(M) >= 1 and DegenerateCycleError when I - M is singular.
Cycle limit_cycle(const SwitchedSystem& sys, const PeriodicSignal& sig,
                  std::size_t orbit_samples, const Tolerances& tol = {});

/// Smallest distance from `x` to the polyline through `orbit`.
double distance_to_orbit(const Vector& x, const std::vector<std::pair<double, Vector>>& orbit);

}  // namespace ici

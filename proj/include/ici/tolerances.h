#pragma once

#include <string_view>

namespace ici {

// Numerical defaults shared across modules. Every field can be overridden from
// the command line with `--tol NAME=VALUE`.
struct Tolerances {
  // Per-subsystem equilibria agreeing within this (inf-norm) are "common".
  double equilibrium = 1e-9;
  // Fixed-point residual accepted for a limit cycle, relative to 1 + |x*|.
  double cycle = 1e-9;
  // Relative bracket width at which the eta bisection stops.
  double refine = 1e-6;
  // Simulations stop once |x| exceeds this.
  double divergence_guard = 1e12;
  // LU pivots below pivot * max|M_ij| are treated as zero.
  double pivot = 1e-13;
  // QR sweep cap per matrix row for the eigenvalue solver.
  double qr_sweeps_per_row = 100;

  // Sets a field by its command-line name. Returns false for unknown names.
  bool set(std::string_view name, double value);
};

}  // namespace ici

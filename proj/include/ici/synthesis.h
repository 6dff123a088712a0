#pragma once

// Constructive stabilisation: stable convex combinations of the subsystem
// matrices and the range of signal scales that keep the periodic signal
// stabilising.

#include <cstddef>
#include <span>
#include <vector>

#include "ici/linalg.h"
#include "ici/model.h"
#include "ici/tolerances.h"

namespace ici {

struct CombinationResult {
  Weights weights;
  double abscissa;           // max Re lambda(sum alpha_i A_i)
  bool found;                // abscissa < 0
  std::size_t evaluations;   // spectral abscissa evaluations spent
};

/// Minimises the spectral abscissa of sum alpha_i A_i over the simplex: an
/// exhaustive lattice scan with spacing `resolution`, then (if `refine`) a
/// Nelder-Mead polish started from the best lattice point. Returned weights
/// carry period 1.
CombinationResult find_stable_combination(std::span<const Matrix> matrices,
                                          double resolution = 0.01, bool refine = true,
                                          const Tolerances& tol = {});

struct EtaSample {
  double eta;
  double spectral_radius;
};

struct EtaSearchResult {
  /// Largest eta verified stable in the stable interval that starts at 0+.
  /// A numerical estimate of the existential dwell-time bound.
  double eta_star = 0.0;
  /// Ascending grid eta_max/N, 2 eta_max/N, ..., eta_max.
  std::vector<EtaSample> grid;
  /// The smallest grid point is stable, so every grid eta <= eta_star is.
  bool stable_prefix = false;
};

/// Scans rho(monodromy(from_weights(w, eta))) on an eta grid and bisects the
/// first stable/unstable transition to relative width tol.refine. Throws
/// InstabilityError if the average matrix is not Hurwitz.
EtaSearchResult max_stable_eta(const SwitchedSystem& sys, const Weights& w, double eta_max,
                               std::size_t grid_points, const Tolerances& tol = {});

/// 10 / |A_avg|_2, beyond which the averaging argument has no force.
double default_eta_max(const SwitchedSystem& sys, const Weights& w);

}  // namespace ici

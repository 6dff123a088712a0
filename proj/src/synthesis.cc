#include "ici/synthesis.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "ici/errors.h"
#include "ici/signals.h"
#include "ici/stability.h"

namespace ici {

namespace {

constexpr double kMaxLatticePoints = 5e6;

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(const std::vector<double>& y) {
  std::vector<double> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    running += u[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(y[i] - theta, 0.0);
  return out;
}

class AbscissaObjective {
 public:
  AbscissaObjective(std::span<const Matrix> matrices, const Tolerances& tol)
      : matrices_(matrices), tol_(tol) {}

  double operator()(const std::vector<double>& alpha) {
    ++evaluations_;
    Matrix a = Matrix::Zero(matrices_[0].rows(), matrices_[0].cols());
    for (std::size_t i = 0; i < matrices_.size(); ++i) a += alpha[i] * matrices_[i];
    return spectral_abscissa(a, tol_);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  std::span<const Matrix> matrices_;
  const Tolerances& tol_;
  std::size_t evaluations_ = 0;
};

// Visits every alpha with alpha_i = k_i / total, sum k_i = total.
void for_each_lattice_point(std::size_t m, std::size_t total,
                            const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<std::size_t> counts(m, 0);
  std::vector<double> alpha(m, 0.0);
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t i,
                                                             std::size_t left) {
    if (i + 1 == m) {
      counts[i] = left;
      for (std::size_t j = 0; j < m; ++j) {
        alpha[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
      }
      visit(alpha);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      counts[i] = k;
      recurse(i + 1, left - k);
    }
  };
  recurse(0, total);
}

double lattice_size(std::size_t m, std::size_t total) {
  // C(total + m - 1, m - 1)
  double c = 1.0;
  for (std::size_t j = 1; j < m; ++j) {
    c *= static_cast<double>(total + j) / static_cast<double>(j);
  }
  return c;
}

// Nelder-Mead over R^m with every vertex projected onto the simplex before
// evaluation. Updates best/best_value in place.
void nelder_mead_polish(AbscissaObjective& objective, std::vector<double>& best,
                        double& best_value, double initial_step) {
  const std::size_t m = best.size();
  struct Vertex {
    std::vector<double> y;
    double f;
  };
  auto evaluate = [&](const std::vector<double>& y) {
    return objective(project_to_simplex(y));
  };

  std::vector<Vertex> simplex;
  simplex.push_back({best, best_value});
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> y = best;
    y[i] += initial_step;
    simplex.push_back({y, evaluate(y)});
  }

  const std::size_t max_iterations = 200 * m;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    double size = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (std::size_t i = 0; i < m; ++i) {
        size = std::max(size, std::abs(simplex[v].y[i] - simplex[0].y[i]));
      }
    }
    if (simplex.back().f - simplex.front().f < 1e-13 && size < 1e-10) break;

    std::vector<double> centroid(m, 0.0);
    for (std::size_t v = 0; v + 1 < simplex.size(); ++v) {
      for (std::size_t i = 0; i < m; ++i) centroid[i] += simplex[v].y[i];
    }
    for (double& c : centroid) c /= static_cast<double>(m);

    auto along = [&](double coeff) {
      std::vector<double> y(m);
      for (std::size_t i = 0; i < m; ++i) {
        y[i] = centroid[i] + coeff * (simplex.back().y[i] - centroid[i]);
      }
      return y;
    };

    const auto reflected = along(-1.0);
    const double f_reflected = evaluate(reflected);
    if (f_reflected < simplex.front().f) {
      const auto expanded = along(-2.0);
      const double f_expanded = evaluate(expanded);
      simplex.back() = f_expanded < f_reflected ? Vertex{expanded, f_expanded}
                                                : Vertex{reflected, f_reflected};
      continue;
    }
    if (f_reflected < simplex[simplex.size() - 2].f) {
      simplex.back() = {reflected, f_reflected};
      continue;
    }
    const bool outside = f_reflected < simplex.back().f;
    const auto contracted = along(outside ? -0.5 : 0.5);
    const double f_contracted = evaluate(contracted);
    if (f_contracted < std::min(f_reflected, simplex.back().f)) {
      simplex.back() = {contracted, f_contracted};
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (std::size_t i = 0; i < m; ++i) {
        simplex[v].y[i] = simplex[0].y[i] + 0.5 * (simplex[v].y[i] - simplex[0].y[i]);
      }
      simplex[v].f = evaluate(simplex[v].y);
    }
  }
  const auto it = std::min_element(simplex.begin(), simplex.end(),
                                   [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  if (it->f < best_value) {
    best = project_to_simplex(it->y);
    best_value = it->f;
  }
}

double radius_or_inf(const SwitchedSystem& sys, const Weights& w, double eta,
                     const Tolerances& tol) {
  const Matrix phi = monodromy(sys, from_weights(w, eta));
  if (!phi.allFinite()) return std::numeric_limits<double>::infinity();
  return spectral_radius(phi, tol);
}

}  // namespace

CombinationResult find_stable_combination(std::span<const Matrix> matrices, double resolution,
                                          bool refine, const Tolerances& tol) {
  if (matrices.empty()) throw InvalidArgument("find_stable_combination: no matrices");
  for (const auto& a : matrices) {
    require_square(a, "find_stable_combination");
    if (a.rows() != matrices[0].rows()) {
      throw DimensionError("find_stable_combination: matrices have different dimensions");
    }
  }
  if (!(resolution > 0.0) || resolution > 1.0) {
    throw InvalidArgument("find_stable_combination: resolution must lie in (0, 1]");
  }
  const std::size_t m = matrices.size();
  const auto total = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / resolution)));
  if (lattice_size(m, total) > kMaxLatticePoints) {
    throw InvalidArgument("find_stable_combination: lattice has more than " +
                          std::to_string(static_cast<long>(kMaxLatticePoints)) +
                          " points; use a coarser resolution");
  }

  AbscissaObjective objective(matrices, tol);
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  for_each_lattice_point(m, total, [&](const std::vector<double>& alpha) {
    const double value = objective(alpha);
    if (value < best_value) {
      best_value = value;
      best = alpha;
    }
  });

  if (refine && m > 1) nelder_mead_polish(objective, best, best_value, resolution);

  return CombinationResult{Weights::normalised(best, 1.0), best_value, best_value < 0.0,
                           objective.evaluations()};
}

EtaSearchResult max_stable_eta(const SwitchedSystem& sys, const Weights& w, double eta_max,
                               std::size_t grid_points, const Tolerances& tol) {
  if (!(eta_max > 0.0) || !std::isfinite(eta_max)) {
    throw InvalidArgument("max_stable_eta: eta_max must be positive");
  }
  if (grid_points == 0) throw InvalidArgument("max_stable_eta: need at least one grid point");
  const double abscissa = spectral_abscissa(average_system(sys, w).A, tol);
  if (!(abscissa < 0.0)) {
    throw InstabilityError("max_stable_eta: average matrix is not stable (abscissa " +
                           std::to_string(abscissa) + ")");
  }

  EtaSearchResult result;
  result.grid.reserve(grid_points);
  for (std::size_t j = 1; j <= grid_points; ++j) {
    const double eta = eta_max * static_cast<double>(j) / static_cast<double>(grid_points);
    result.grid.push_back({eta, radius_or_inf(sys, w, eta, tol)});
  }
  result.stable_prefix = result.grid.front().spectral_radius < 1.0;

  const auto first_unstable =
      std::find_if(result.grid.begin(), result.grid.end(),
                   [](const EtaSample& s) { return !(s.spectral_radius < 1.0); });
  if (first_unstable == result.grid.end()) {
    result.eta_star = eta_max;
    return result;
  }
  double lo = first_unstable == result.grid.begin() ? 0.0 : std::prev(first_unstable)->eta;
  double hi = first_unstable->eta;
  for (int iter = 0; iter < 200 && hi - lo > tol.refine * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (radius_or_inf(sys, w, mid, tol) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.eta_star = lo;
  return result;
}

double default_eta_max(const SwitchedSystem& sys, const Weights& w) {
  const double norm = operator_norm_2(average_system(sys, w).A);
  if (norm == 0.0) return 10.0;
  return 10.0 / norm;
}

}  // namespace ici

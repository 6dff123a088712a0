#pragma once

// Switched affine systems  x' = A_i x + b_i,  i = 0..m-1,  their convex
// combinations and equilibria.
//
// Subsystem indices are 0-based throughout the library; file formats and
// reports use 1-based indices.

#include <optional>
#include <vector>

#include "ici/linalg.h"
#include "ici/tolerances.h"

namespace ici {

struct SubSystem {
  Matrix A;
  Vector b;

  SubSystem() = default;
  /// Validates shapes and finiteness. A linear subsystem has b == 0.
  SubSystem(Matrix a, Vector drift);
  /// Linear subsystem (b = 0).
  explicit SubSystem(Matrix a);

  Eigen::Index dim() const { return A.rows(); }
  bool is_linear() const { return b.isZero(0.0); }
};

class SwitchedSystem {
 public:
  /// Throws InvalidArgument if `subsystems` is empty or dimensions disagree.
  explicit SwitchedSystem(std::vector<SubSystem> subsystems);

  std::size_t size() const { return subsystems_.size(); }
  Eigen::Index dim() const { return dim_; }
  const SubSystem& operator[](std::size_t i) const { return subsystems_[i]; }
  const std::vector<SubSystem>& subsystems() const { return subsystems_; }

  bool is_linear() const;
  /// The underlying linear system: same A_i, every b_i = 0.
  SwitchedSystem linear_part() const;
  std::vector<Matrix> matrices() const;

  bool operator==(const SwitchedSystem& other) const;

 private:
  std::vector<SubSystem> subsystems_;
  Eigen::Index dim_;
};

/// Normalised activation fractions on the simplex plus the cycle period.
class Weights {
 public:
  /// Requires alpha_i >= 0, sum alpha = 1 within 1e-12 and period > 0.
  Weights(std::vector<double> alpha, double period);

  /// Rescales nonnegative `raw` to sum to one. Throws if all entries are zero.
  static Weights normalised(const std::vector<double>& raw, double period);

  const std::vector<double>& alpha() const { return alpha_; }
  double operator[](std::size_t i) const { return alpha_[i]; }
  std::size_t size() const { return alpha_.size(); }
  double period() const { return period_; }

 private:
  std::vector<double> alpha_;
  double period_;
};

/// Sum alpha_i A_i, sum alpha_i b_i.
SubSystem average_system(const SwitchedSystem& sys, const Weights& w);

/// -A^{-1} b. Throws NoEquilibriumError when A is singular.
Vector equilibrium(const SubSystem& sub, const Tolerances& tol = {});

/// The shared equilibrium of every subsystem, if the per-subsystem equilibria
/// agree pairwise within tol.equilibrium in the inf-norm; their mean is
/// returned. Throws NoEquilibriumError naming the first singular subsystem.
std::optional<Vector> common_equilibrium(const SwitchedSystem& sys,
                                         const Tolerances& tol = {});

}  // namespace ici

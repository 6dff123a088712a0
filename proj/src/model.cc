#include "ici/model.h"

#include <cmath>
#include <numeric>
#include <string>

#include "ici/errors.h"

namespace ici {

SubSystem::SubSystem(Matrix a, Vector drift) : A(std::move(a)), b(std::move(drift)) {
  require_square(A, "SubSystem");
  if (b.size() != A.rows()) {
    throw DimensionError("SubSystem: drift has length " + std::to_string(b.size()) +
                         " but A is " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()));
  }
  if (!b.allFinite()) throw InvalidArgument("SubSystem: drift has non-finite entries");
}

SubSystem::SubSystem(Matrix a) : SubSystem(a, Vector::Zero(a.rows())) {}

SwitchedSystem::SwitchedSystem(std::vector<SubSystem> subsystems)
    : subsystems_(std::move(subsystems)), dim_(0) {
  if (subsystems_.empty()) {
    throw InvalidArgument("SwitchedSystem: need at least one subsystem");
  }
  dim_ = subsystems_.front().dim();
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    // Re-run the SubSystem checks in case members were assigned directly.
    const auto& s = subsystems_[i];
    require_square(s.A, "SwitchedSystem");
    if (s.dim() != dim_ || s.b.size() != dim_) {
      throw DimensionError("SwitchedSystem: subsystem " + std::to_string(i + 1) +
                           " has dimension " + std::to_string(s.dim()) + ", expected " +
                           std::to_string(dim_));
    }
  }
}

bool SwitchedSystem::is_linear() const {
  for (const auto& s : subsystems_) {
    if (!s.is_linear()) return false;
  }
  return true;
}

SwitchedSystem SwitchedSystem::linear_part() const {
  std::vector<SubSystem> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.emplace_back(s.A);
  return SwitchedSystem(std::move(out));
}

std::vector<Matrix> SwitchedSystem::matrices() const {
  std::vector<Matrix> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.A);
  return out;
}

bool SwitchedSystem::operator==(const SwitchedSystem& other) const {
  if (size() != other.size() || dim_ != other.dim_) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (subsystems_[i].A != other.subsystems_[i].A) return false;
    if (subsystems_[i].b != other.subsystems_[i].b) return false;
  }
  return true;
}

Weights::Weights(std::vector<double> alpha, double period)
    : alpha_(std::move(alpha)), period_(period) {
  if (alpha_.empty()) throw InvalidArgument("Weights: empty weight vector");
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw InvalidArgument("Weights: period must be positive and finite");
  }
  for (double a : alpha_) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("Weights: activation fractions must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("Weights: activation fractions sum to " + std::to_string(total) +
                          ", expected 1");
  }
}

Weights Weights::normalised(const std::vector<double>& raw, double period) {
  double total = 0.0;
  for (double a : raw) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("Weights: activation fractions must be finite and nonnegative");
    }
    total += a;
  }
  if (total <= 0.0) throw InvalidArgument("Weights: all activation fractions are zero");
  std::vector<double> alpha(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) alpha[i] = raw[i] / total;
  return Weights(std::move(alpha), period);
}

SubSystem average_system(const SwitchedSystem& sys, const Weights& w) {
  if (w.size() != sys.size()) {
    throw DimensionError("average_system: " + std::to_string(w.size()) + " weights for " +
                         std::to_string(sys.size()) + " subsystems");
  }
  const auto n = sys.dim();
  Matrix a = Matrix::Zero(n, n);
  Vector b = Vector::Zero(n);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    a += w[i] * sys[i].A;
    b += w[i] * sys[i].b;
  }
  return SubSystem(std::move(a), std::move(b));
}

Vector equilibrium(const SubSystem& sub, const Tolerances& tol) {
  try {
    return solve(sub.A, -sub.b, tol);
  } catch (const SingularMatrixError& e) {
    throw NoEquilibriumError(std::string("equilibrium: state matrix is singular; ") + e.what(),
                             NoEquilibriumError::npos);
  }
}

std::optional<Vector> common_equilibrium(const SwitchedSystem& sys, const Tolerances& tol) {
  std::vector<Vector> points;
  points.reserve(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    try {
      points.push_back(solve(sys[i].A, -sys[i].b, tol));
    } catch (const SingularMatrixError& e) {
      throw NoEquilibriumError("common_equilibrium: subsystem " + std::to_string(i + 1) +
                                   " has a singular state matrix; " + e.what(),
                               i);
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i] - points[j]).lpNorm<Eigen::Infinity>() > tol.equilibrium) {
        return std::nullopt;
      }
    }
  }
  Vector mean = Vector::Zero(sys.dim());
  for (const auto& p : points) mean += p;
  return mean / static_cast<double>(points.size());
}

}  // namespace ici

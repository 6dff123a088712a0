#include "ici/stability.h"

#include <cmath>
#include <string>

#include "ici/errors.h"

namespace ici {

namespace {

Matrix matrix_power(Matrix base, std::size_t exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1u) result = base * result;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace

Matrix monodromy(const SwitchedSystem& sys, const PeriodicSignal& sig) {
  sig.check_indices(sys.size());
  Matrix phi = Matrix::Identity(sys.dim(), sys.dim());
  for (const auto& seg : sig.segments()) {
    phi = mat_exp(seg.duration * sys[seg.index].A) * phi;
  }
  return phi;
}

Matrix transition_matrix(const SwitchedSystem& sys, const PeriodicSignal& sig,
                         double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("transition_matrix: horizon must be finite and nonnegative");
  }
  sig.check_indices(sys.size());
  const double period = sig.period();
  const auto full = static_cast<std::size_t>(std::floor(horizon / period + 1e-9));
  double remaining = horizon - static_cast<double>(full) * period;
  if (remaining < 1e-12 * period) remaining = 0.0;

  Matrix phi = matrix_power(monodromy(sys, sig), full);
  for (const auto& seg : sig.segments()) {
    if (remaining <= 0.0) break;
    const double dt = std::min(seg.duration, remaining);
    phi = mat_exp(dt * sys[seg.index].A) * phi;
    remaining -= dt;
  }
  return phi;
}

StabilityReport is_ici_stable(const SwitchedSystem& sys, const PeriodicSignal& sig,
                              double eta, const Tolerances& tol) {
  StabilityReport report;
  report.monodromy = monodromy(sys, sig);
  report.spectral_radius = spectral_radius(report.monodromy, tol);
  report.determinant = determinant(report.monodromy);
  report.det_oracle = det_monodromy_oracle(sys, sig);
  report.is_stable = report.spectral_radius < 1.0;
  report.norm_condition_holds = operator_norm_2(report.monodromy) < 1.0;
  report.eta = eta;
  report.period = sig.period();
  return report;
}

double det_monodromy_oracle(const SwitchedSystem& sys, const PeriodicSignal& sig) {
  sig.check_indices(sys.size());
  double exponent = 0.0;
  for (const auto& seg : sig.segments()) exponent += seg.duration * sys[seg.index].A.trace();
  return std::exp(exponent);
}

BchTerms bch_terms(const SwitchedSystem& sys, const std::vector<double>& fractions,
                   const std::vector<std::size_t>& order) {
  if (fractions.size() != order.size() || order.empty()) {
    throw DimensionError("bch_terms: need one fraction per activation, and at least one");
  }
  const auto n = sys.dim();
  BchTerms z{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (order[j] >= sys.size()) {
      throw InvalidArgument("bch_terms: activation order refers to subsystem " +
                            std::to_string(order[j] + 1));
    }
    const Matrix x = fractions[j] * sys[order[j]].A;
    if (j == 0) {
      z.first = x;
      continue;
    }
    // log(e^X e^Z) with X of degree 1 and Z graded, truncated after degree 3.
    const Matrix x_z1 = commutator(x, z.first);
    BchTerms next;
    next.first = x + z.first;
    next.second = z.second + 0.5 * x_z1;
    next.third = z.third + 0.5 * commutator(x, z.second) +
                 (commutator(x, x_z1) + commutator(z.first, -x_z1)) / 12.0;
    z = std::move(next);
  }
  return z;
}

BchTerms bch_terms(const SwitchedSystem& sys, const PeriodicSignal& sig) {
  std::vector<double> fractions;
  std::vector<std::size_t> order;
  for (const auto& seg : sig.segments()) {
    fractions.push_back(seg.duration / sig.period());
    order.push_back(seg.index);
  }
  return bch_terms(sys, fractions, order);
}

Matrix bch_c2(const SwitchedSystem& sys, const Weights& w,
              const std::vector<std::size_t>& order) {
  return bch_commutator(sys, w, order, 0.0, 2);
}

Matrix bch_commutator(const SwitchedSystem& sys, const Weights& w,
                      const std::vector<std::size_t>& order, double period,
                      int truncation) {
  if (w.size() != sys.size()) {
    throw DimensionError("bch_commutator: " + std::to_string(w.size()) + " weights for " +
                         std::to_string(sys.size()) + " subsystems");
  }
  if (truncation != 2 && truncation != 3) {
    throw InvalidArgument("bch_commutator: truncation order must be 2 or 3");
  }
  std::vector<double> fractions;
  fractions.reserve(order.size());
  for (std::size_t idx : order) {
    if (idx >= w.size()) throw InvalidArgument("bch_commutator: order index out of range");
    fractions.push_back(w[idx]);
  }
  const BchTerms terms = bch_terms(sys, fractions, order);
  if (truncation == 3) return terms.second + period * terms.third;
  return terms.second;
}

std::vector<int> default_k_list() {
  std::vector<int> ks;
  for (int k = 1; k <= 1024; k *= 2) ks.push_back(k);
  return ks;
}

DwellBoundResult dwell_bound_evaluate(const SwitchedSystem& sys, const Weights& w, double eta,
                             const std::vector<int>& k_list, int truncation) {
  if (!(eta > 0.0)) throw InvalidArgument("dwell_bound_evaluate: eta must be positive");
  if (k_list.empty()) throw InvalidArgument("dwell_bound_evaluate: k list is empty");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) order.push_back(i);
  }
  const double s = eta * w.period();
  const Matrix a = average_system(sys, w).A;
  const Matrix c = bch_commutator(sys, w, order, s, truncation);

  DwellBoundResult result;
  for (int k : k_list) {
    if (k <= 0) throw InvalidArgument("dwell_bound_evaluate: k must be a positive integer");
    const double kd = static_cast<double>(k);
    DwellBoundTerm term{k, operator_norm_2(mat_exp((s * s / kd) * c)),
                    1.0 / operator_norm_2(mat_exp((s / kd) * a))};
    if (!(term.lhs < term.rhs)) result.holds = false;
    result.terms.push_back(term);
  }
  return result;
}

bool dwell_bound_holds(const SwitchedSystem& sys, const Weights& w, double eta,
                        const std::vector<int>& k_list, int truncation) {
  return dwell_bound_evaluate(sys, w, eta, k_list, truncation).holds;
}

double average_error_bound(const Matrix& a, const Matrix& c, double eta, double period) {
  if (!(eta > 0.0) || !(period > 0.0)) {
    throw InvalidArgument("average_error_bound: eta and period must be positive");
  }
  const double ct = operator_norm_2(eta * period * c);
  return ct * std::exp(operator_norm_2(period * a)) * std::exp(ct);
}

double average_deviation(const SwitchedSystem& sys, const Weights& w, double eta,
                         double horizon) {
  const Matrix a = average_system(sys, w).A;
  const Matrix phi = transition_matrix(sys, from_weights(w, eta), horizon);
  return operator_norm_2(phi - mat_exp(horizon * a));
}

}  // namespace ici

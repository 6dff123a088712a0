#pragma once

// Monodromy matrices of switched linear systems under periodic signals and the
// certificates built on them.

#include <cstddef>
#include <vector>

#include "ici/linalg.h"
#include "ici/model.h"
#include "ici/signals.h"
#include "ici/tolerances.h"

namespace ici {

/// One-period state-transition matrix of the linear part of `sys`:
/// e^{A_{p(N)} t_N} ... e^{A_{p(1)} t_1}, earliest segment rightmost.
Matrix monodromy(const SwitchedSystem& sys, const PeriodicSignal& sig);

/// State-transition matrix of the linear part over [0, horizon], including a
/// trailing partial period.
Matrix transition_matrix(const SwitchedSystem& sys, const PeriodicSignal& sig,
                         double horizon);

struct StabilityReport {
  Matrix monodromy;
  double spectral_radius = 0.0;
  double determinant = 0.0;
  /// exp(sum duration * tr A), the order-independent closed form of det.
  double det_oracle = 0.0;
  /// rho(monodromy) < 1.
  bool is_stable = false;
  /// |monodromy|_2 < 1; sufficient but not necessary for stability.
  bool norm_condition_holds = false;
  double eta = 1.0;
  double period = 0.0;
};

/// Stability of the origin of the linear part under `sig`. `eta` is recorded
/// in the report only; `sig` is expected to be already scaled.
StabilityReport is_ici_stable(const SwitchedSystem& sys, const PeriodicSignal& sig,
                              double eta = 1.0, const Tolerances& tol = {});

double det_monodromy_oracle(const SwitchedSystem& sys, const PeriodicSignal& sig);

/// Graded terms of log(monodromy) for a signal of unit period whose segments
/// have fractions `fractions[j]` and activate subsystems `order[j]`:
///   log Phi(P) = P first + P^2 second + P^3 third + O(P^4)
/// for the same signal stretched to period P.
struct BchTerms {
  Matrix first;
  Matrix second;
  Matrix third;
};

BchTerms bch_terms(const SwitchedSystem& sys, const std::vector<double>& fractions,
                   const std::vector<std::size_t>& order);
BchTerms bch_terms(const SwitchedSystem& sys, const PeriodicSignal& sig);

/// Second-order coefficient 1/2 sum_{j>i} a_j a_i [A_{p(j)}, A_{p(i)}], where
/// segment j activates subsystem order[j] for the fraction w[order[j]].
Matrix bch_c2(const SwitchedSystem& sys, const Weights& w,
              const std::vector<std::size_t>& order);

/// The commutator matrix C used in the dwell-time bound. With truncation 2
/// this is bch_c2; truncation 3 adds `period * third`.
Matrix bch_commutator(const SwitchedSystem& sys, const Weights& w,
                      const std::vector<std::size_t>& order, double period,
                      int truncation = 2);

struct DwellBoundTerm {
  int k;
  double lhs;  // |exp((s^2/k) C)|_2
  double rhs;  // 1 / |exp((s/k) A)|_2
};

struct DwellBoundResult {
  bool holds = true;
  std::vector<DwellBoundTerm> terms;
};

/// Geometric grid 1, 2, 4, ..., 1024.
std::vector<int> default_k_list();

/// Evaluates |exp((s^2/k) C)| < |exp((s/k) A)|^{-1} for each k, with
/// s = eta * w.period(), A the weighted average and C = bch_commutator for the
/// natural activation order of `w` (zero weights skipped).
DwellBoundResult dwell_bound_evaluate(const SwitchedSystem& sys, const Weights& w, double eta,
                             const std::vector<int>& k_list, int truncation = 2);

bool dwell_bound_holds(const SwitchedSystem& sys, const Weights& w, double eta,
                        const std::vector<int>& k_list, int truncation = 2);

/// |eta C T| e^{|A T|} e^{|eta C T|} in the induced 2-norm.
double average_error_bound(const Matrix& a, const Matrix& c, double eta, double period);

/// |Phi(horizon) - e^{A horizon}|_2 for the signal from_weights(w, eta), where
/// A is the weighted average of the state matrices.
double average_deviation(const SwitchedSystem& sys, const Weights& w, double eta,
                         double horizon);

}  // namespace ici

#pragma once

// Periodic switching signals and the operations on them: time scaling,
// shifting, permutation and evaluation.

#include <cstddef>
#include <span>
#include <vector>

#include "ici/model.h"

namespace ici {

struct Segment {
  std::size_t index;  // 0-based subsystem id
  double duration;

  bool operator==(const Segment&) const = default;
};

/// A finite list of activation segments repeated forever. Right-continuous:
/// at a switching instant the incoming segment is active.
class PeriodicSignal {
 public:
  /// Requires a nonempty segment list with finite, positive durations.
  explicit PeriodicSignal(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const Segment& operator[](std::size_t i) const { return segments_[i]; }

  double period() const { return period_; }
  /// Shortest segment; the non-vanishing dwell time of the signal.
  double min_dwell() const;
  /// Mean segment duration, period / number of segments.
  double mean_dwell() const;
  /// One past the largest subsystem index referenced.
  std::size_t required_subsystems() const;

  /// Throws InvalidArgument if any index is >= m.
  void check_indices(std::size_t m) const;

  bool operator==(const PeriodicSignal& other) const { return segments_ == other.segments_; }

 private:
  std::vector<Segment> segments_;
  double period_;
};

/// Segments [(0, eta a_0 T), (1, eta a_1 T), ...]; zero weights are skipped.
PeriodicSignal from_weights(const Weights& w, double eta);

/// Every duration multiplied by eta; activation order unchanged.
PeriodicSignal scale(const PeriodicSignal& sig, double eta);

/// The signal t -> sig(t + gamma).
PeriodicSignal shift(const PeriodicSignal& sig, double gamma);

/// Segment i of the result is segment perm[i] of the input.
PeriodicSignal permute(const PeriodicSignal& sig, std::span<const std::size_t> perm);

/// Cyclic rotation by `k` positions: segment i of the result is segment
/// (i + k) mod size of the input.
PeriodicSignal rotate(const PeriodicSignal& sig, std::size_t k);

/// Position of the segment active at time t (t >= 0).
std::size_t active_segment(const PeriodicSignal& sig, double t);
/// Subsystem active at time t (t >= 0).
std::size_t active_index(const PeriodicSignal& sig, double t);

/// Time share of each subsystem over one period. `m` defaults to
/// sig.required_subsystems().
Weights activation_fractions(const PeriodicSignal& sig, std::size_t m = 0);

/// The two-subsystem signal with dwell 2 eta each: subsystem 0 on
/// [0, 2 eta), subsystem 1 on [2 eta, 4 eta), period 4 eta.
PeriodicSignal example_signal(double eta);

/// Sampled-time norm-minimising state feedback: every `step` time units the
/// subsystem minimising x^T (A_i x + b_i) is selected, lowest index on ties.
struct NormMinPolicy {
  double step = 1e-3;

  explicit NormMinPolicy(double h);
};

}  // namespace ici

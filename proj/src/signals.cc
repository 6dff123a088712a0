#include "ici/signals.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ici/errors.h"

namespace ici {

namespace {

// Offsets this close (relative to the period) to a segment boundary are
// treated as landing on the boundary, so no sliver segments are produced.
constexpr double kBoundarySlack = 64 * std::numeric_limits<double>::epsilon();

}  // namespace

PeriodicSignal::PeriodicSignal(std::vector<Segment> segments)
    : segments_(std::move(segments)), period_(0.0) {
  if (segments_.empty()) throw InvalidArgument("PeriodicSignal: no segments");
  for (const auto& s : segments_) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw InvalidArgument("PeriodicSignal: segment durations must be positive and finite");
    }
    period_ += s.duration;
  }
}

double PeriodicSignal::min_dwell() const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) d = std::min(d, s.duration);
  return d;
}

double PeriodicSignal::mean_dwell() const {
  return period_ / static_cast<double>(segments_.size());
}

std::size_t PeriodicSignal::required_subsystems() const {
  std::size_t m = 0;
  for (const auto& s : segments_) m = std::max(m, s.index + 1);
  return m;
}

void PeriodicSignal::check_indices(std::size_t m) const {
  for (const auto& s : segments_) {
    if (s.index >= m) {
      throw InvalidArgument("PeriodicSignal: segment refers to subsystem " +
                            std::to_string(s.index + 1) + " but the system has only " +
                            std::to_string(m));
    }
  }
}

PeriodicSignal from_weights(const Weights& w, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("from_weights: eta must be positive");
  }
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) segments.push_back({i, eta * w[i] * w.period()});
  }
  if (segments.empty()) throw InvalidArgument("from_weights: all weights are zero");
  return PeriodicSignal(std::move(segments));
}

PeriodicSignal scale(const PeriodicSignal& sig, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("scale: eta must be positive");
  }
  std::vector<Segment> segments = sig.segments();
  for (auto& s : segments) s.duration *= eta;
  return PeriodicSignal(std::move(segments));
}

PeriodicSignal rotate(const PeriodicSignal& sig, std::size_t k) {
  std::vector<Segment> segments = sig.segments();
  std::rotate(segments.begin(),
              segments.begin() + static_cast<std::ptrdiff_t>(k % segments.size()),
              segments.end());
  return PeriodicSignal(std::move(segments));
}

PeriodicSignal shift(const PeriodicSignal& sig, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("shift: gamma must be finite and nonnegative");
  }
  const double period = sig.period();
  const double slack = kBoundarySlack * period;
  const double r = std::fmod(gamma, period);
  if (r <= slack || period - r <= slack) return sig;

  double start = 0.0;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    const double end = start + sig[j].duration;
    if (r < end) {
      const double offset = r - start;
      if (offset <= slack) return rotate(sig, j);
      if (end - r <= slack) return rotate(sig, j + 1);
      std::vector<Segment> segments;
      segments.reserve(sig.size() + 1);
      segments.push_back({sig[j].index, sig[j].duration - offset});
      for (std::size_t k = j + 1; k < sig.size(); ++k) segments.push_back(sig[k]);
      for (std::size_t k = 0; k < j; ++k) segments.push_back(sig[k]);
      segments.push_back({sig[j].index, offset});
      return PeriodicSignal(std::move(segments));
    }
    start = end;
  }
  // Rounding put r past the accumulated end: equivalent to no shift.
  return sig;
}

PeriodicSignal permute(const PeriodicSignal& sig, std::span<const std::size_t> perm) {
  if (perm.size() != sig.size()) {
    throw InvalidArgument("permute: permutation has " + std::to_string(perm.size()) +
                          " entries for " + std::to_string(sig.size()) + " segments");
  }
  std::vector<bool> seen(sig.size(), false);
  std::vector<Segment> segments;
  segments.reserve(sig.size());
  for (std::size_t p : perm) {
    if (p >= sig.size() || seen[p]) throw InvalidArgument("permute: not a permutation");
    seen[p] = true;
    segments.push_back(sig[p]);
  }
  return PeriodicSignal(std::move(segments));
}

std::size_t active_segment(const PeriodicSignal& sig, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("active_segment: time must be finite and nonnegative");
  }
  const double tau = std::fmod(t, sig.period());
  double end = 0.0;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    end += sig[j].duration;
    if (tau < end) return j;
  }
  return sig.size() - 1;
}

std::size_t active_index(const PeriodicSignal& sig, double t) {
  return sig[active_segment(sig, t)].index;
}

Weights activation_fractions(const PeriodicSignal& sig, std::size_t m) {
  if (m == 0) m = sig.required_subsystems();
  sig.check_indices(m);
  std::vector<double> time(m, 0.0);
  for (const auto& s : sig.segments()) time[s.index] += s.duration;
  return Weights::normalised(time, sig.period());
}

PeriodicSignal example_signal(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("example_signal: eta must be positive");
  }
  return PeriodicSignal({{0, 2.0 * eta}, {1, 2.0 * eta}});
}

NormMinPolicy::NormMinPolicy(double h) : step(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("NormMinPolicy: step must be positive");
  }
}

}  // namespace ici

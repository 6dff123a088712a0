// End-to-end checks on the bundled examples and randomized invariants. Each
// criterion prints one PASS/FAIL line and must finish within its time budget.

#include <algorithm>
#include <chrono>
#include <complex>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ici/linalg.h"
#include "ici/model.h"
#include "ici/presets.h"
#include "ici/signals.h"
#include "ici/simulate.h"
#include "ici/stability.h"
#include "ici/synthesis.h"

using namespace ici;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures without aborting so every failing check is reported.
class Checker {
 public:
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }
  // Measured value reported on success as well.
  void note(const std::string& what) { notes_ += (notes_.empty() ? "" : ", ") + what; }
  Outcome outcome() const {
    if (!ok_) return {false, detail_};
    return {true, notes_};
  }

 private:
  bool ok_ = true;
  std::string detail_;
  std::string notes_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<Vector> unit_circle(int k) {
  std::vector<Vector> pts;
  for (int j = 0; j < k; ++j) {
    const double th = 2.0 * std::numbers::pi * j / k;
    pts.push_back(Vector{{std::cos(th), std::sin(th)}});
  }
  return pts;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

PeriodicSignal random_signal(std::mt19937_64& rng, std::size_t m, std::size_t segments) {
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::uniform_real_distribution<double> dur(0.1, 1.0);
  std::vector<Segment> segs;
  for (std::size_t j = 0; j < segments; ++j) segs.push_back({pick(rng), dur(rng)});
  return PeriodicSignal(std::move(segs));
}

// Distance between spectra as multisets, by greedy nearest matching.
double spectrum_gap(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& z : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](const auto& p, const auto& q) {
      return std::abs(p - z) < std::abs(q - z);
    });
    worst = std::max(worst, std::abs(*best - z));
    b.erase(best);
  }
  return worst;
}

const Weights kHalf({0.5, 0.5}, 4.0);

Outcome criterion1() {
  Checker c;
  const auto eq = common_equilibrium(presets::example1());
  c.require(eq.has_value(), "no common equilibrium");
  if (eq) {
    const double err = (*eq - Vector{{0.0, -1.0}}).lpNorm<Eigen::Infinity>();
    c.require(err <= 1e-9, "error " + num(err));
    c.note("error " + num(err));
  }
  return c.outcome();
}

Outcome criterion2() {
  Checker c;
  const auto sys = presets::example1();
  for (double eta : {1.1, 1e-3}) {
    const auto r = is_ici_stable(sys, example_signal(eta), eta);
    c.require(r.is_stable, "unstable at eta " + num(eta) + " (rho " + num(r.spectral_radius) + ")");
  }
  const Vector target{{0.0, -1.0}};
  double worst = 0.0;
  for (const Vector& x0 : unit_circle(8)) {
    const Trajectory traj = simulate(sys, example_signal(1.1), x0, 60.0, 0.01);
    worst = std::max(worst, (traj.back().x - target).norm());
  }
  c.require(worst < 1e-3, "final distance " + num(worst));
  c.note("final distance " + num(worst));
  return c.outcome();
}

Outcome criterion3() {
  Checker c;
  const auto sys = presets::example2();
  const Vector e2 = equilibrium(sys[1]);
  c.require(std::abs(e2(0) - -3.64) <= 0.01 && std::abs(e2(1) - 0.82) <= 0.01,
            "e2 = (" + num(e2(0)) + ", " + num(e2(1)) + ")");
  const Vector avg = equilibrium(average_system(sys, Weights({0.5, 0.5}, 1.0)));
  const double err = (avg - Vector{{0.0, 3.0}}).lpNorm<Eigen::Infinity>();
  c.require(err <= 1e-9, "average equilibrium error " + num(err));
  c.note("e2 = (" + num(e2(0)) + ", " + num(e2(1)) + ")");
  return c.outcome();
}

Outcome criterion4() {
  Checker c;
  const auto sys = presets::example2();
  const PeriodicSignal sig = example_signal(0.5);
  const double rho = spectral_radius(poincare_map(sys, sig).M);
  c.require(rho < 1.0, "rho(M) " + num(rho));
  const Cycle cyc = limit_cycle(sys, sig, 2000);
  c.require(cyc.practical_radius.has_value() && *cyc.practical_radius > 1e-6,
            "orbit collapsed to a point");
  double spread = 0.0;
  for (const auto& [t, x] : cyc.orbit) spread = std::max(spread, (x - cyc.fixed_point).norm());
  c.require(spread > 1e-6, "orbit has no extent");

  // 8 points of the closed unit ball: the centre and 7 on circles of radius 1/2 and 1.
  std::vector<Vector> starts{Vector::Zero(2)};
  for (const Vector& p : unit_circle(4)) starts.push_back(p);
  for (int j = 0; j < 3; ++j) {
    const double th = 0.4 + 2.0 * std::numbers::pi * j / 3;
    starts.push_back(0.5 * Vector{{std::cos(th), std::sin(th)}});
  }
  double worst = 0.0;
  for (const Vector& x0 : starts) {
    const Trajectory traj = simulate(sys, sig, x0, 60.0, 0.01);
    worst = std::max(worst, distance_to_orbit(traj.back().x, cyc.orbit));
  }
  c.require(worst < 1e-3, "distance to orbit " + num(worst));
  c.note("rho(M) " + num(rho) + ", distance to orbit " + num(worst));

  const Cycle fast = limit_cycle(sys, example_signal(0.25), 2000);
  c.require(fast.practical_radius && cyc.practical_radius &&
                *fast.practical_radius < *cyc.practical_radius,
            "practical radius did not shrink");
  return c.outcome();
}

Outcome criterion5() {
  Checker c;
  // Weights with unit period, so from_weights(w, eta) has period eta and the
  // unit horizon spans 1/eta whole periods.
  const Weights w({0.5, 0.5}, 1.0);
  const auto sys = presets::example1().linear_part();
  const std::vector<double> etas{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> dev;
  for (double eta : etas) dev.push_back(average_deviation(sys, w, eta, 1.0));
  for (std::size_t i = 1; i < etas.size(); ++i) {
    c.require(dev[i] < dev[i - 1], "deviation not decreasing at eta " + num(etas[i]));
  }
  // Least-squares slope of log dev against log eta.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    mx += std::log(etas[i]);
    my += std::log(dev[i]);
  }
  mx /= etas.size();
  my /= etas.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    sxy += (std::log(etas[i]) - mx) * (std::log(dev[i]) - my);
    sxx += (std::log(etas[i]) - mx) * (std::log(etas[i]) - mx);
  }
  const double slope = sxy / sxx;
  c.require(slope >= 0.9, "slope " + num(slope));
  c.note("slope " + num(slope));
  return c.outcome();
}

Outcome criterion6() {
  Checker c;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> segs(1, 6);
  double worst_oracle = 0.0;
  double worst_perm = 0.0;
  int verdict_changes = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Eigen::Index n = dim(rng);
    const std::size_t m = count(rng);
    std::vector<SubSystem> subs;
    for (std::size_t i = 0; i < m; ++i) subs.emplace_back(random_matrix(rng, n));
    const SwitchedSystem sys(subs);
    const PeriodicSignal sig = random_signal(rng, m, segs(rng));
    const Matrix phi = monodromy(sys, sig);
    const double det = determinant(phi);
    const bool stable = spectral_radius(phi) < 1.0;
    const double oracle = det_monodromy_oracle(sys, sig);
    worst_oracle = std::max(worst_oracle, std::abs(det - oracle) / std::abs(oracle));
    std::vector<std::size_t> perm(sig.size());
    for (int p = 0; p < 10; ++p) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const Matrix phi_p = monodromy(sys, permute(sig, perm));
      const double dp = determinant(phi_p);
      worst_perm = std::max(worst_perm, std::abs(dp - det) / std::abs(det));
      // Reordering segments non-cyclically may change the spectrum, so a
      // change of stability verdict is counted, not treated as a failure.
      if ((spectral_radius(phi_p) < 1.0) != stable) ++verdict_changes;
    }
  }
  c.require(worst_oracle <= 1e-10, "oracle mismatch " + num(worst_oracle));
  c.require(worst_perm <= 1e-10, "permutation changed determinant by " + num(worst_perm));
  c.note("oracle " + num(worst_oracle) + ", permutation " + num(worst_perm) + ", " +
         std::to_string(verdict_changes) + "/1200 permutations changed the rho verdict");
  return c.outcome();
}

Outcome criterion7() {
  Checker c;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const std::size_t m = 2 + trial % 3;
    std::vector<SubSystem> subs;
    for (std::size_t i = 0; i < m; ++i) subs.emplace_back(random_matrix(rng, n));
    const SwitchedSystem sys(subs);
    const PeriodicSignal sig = random_signal(rng, m, 2 + trial % 5);
    const auto base = spectrum(monodromy(sys, sig)).eigenvalues;
    const double scale = std::max(1.0, spectral_radius(monodromy(sys, sig)));
    for (std::size_t k = 1; k < sig.size(); ++k) {
      const auto s = spectrum(monodromy(sys, rotate(sig, k))).eigenvalues;
      worst = std::max(worst, spectrum_gap(base, s) / scale);
    }
    for (int g = 0; g < 5; ++g) {
      const double gamma = 3.0 * sig.period() * u(rng);
      const auto s = spectrum(monodromy(sys, shift(sig, gamma))).eigenvalues;
      worst = std::max(worst, spectrum_gap(base, s) / scale);
    }
  }
  c.require(worst <= 1e-8, "spectrum moved by " + num(worst));
  c.note("max spectrum change " + num(worst));
  return c.outcome();
}

Outcome criterion8() {
  Checker c;
  std::mt19937_64 rng(8);
  double lo = 1.0, hi = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const Matrix a = random_matrix(rng, 2);
    const Matrix b = random_matrix(rng, 2);
    const Matrix target = mat_exp(a + b);
    double prev = -1.0;
    for (int k = 8; k <= 1024; k *= 2) {
      const Matrix step = mat_exp(a / k) * mat_exp(b / k);
      Matrix p = step;
      for (int d = k; d > 1; d /= 2) p = p * p;  // k is a power of two
      const double dev = operator_norm_2(p - target);
      if (prev > 0.0) {
        const double ratio = dev / prev;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      prev = dev;
    }
  }
  c.require(lo >= 0.375 && hi <= 0.625, "ratios in [" + num(lo) + ", " + num(hi) + "]");
  c.note("ratios in [" + num(lo) + ", " + num(hi) + "]");
  return c.outcome();
}

Outcome criterion9() {
  Checker c;
  const auto sys = presets::example1().linear_part();
  const NormMinPolicy policy(1e-3);
  double worst = 0.0;
  std::size_t violations = 0;
  for (const Vector& x0 : unit_circle(8)) {
    const Trajectory traj = simulate_norm_min(sys, x0, 30.0, policy);
    worst = std::max(worst, traj.back().x.norm());
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
      const auto& s = traj.samples[k];
      const double chosen = s.x.dot(sys[s.active].A * s.x);
      for (std::size_t i = 0; i < sys.size(); ++i) {
        const double v = s.x.dot(sys[i].A * s.x);
        if (v < chosen || (v == chosen && i < s.active)) ++violations;
      }
    }
  }
  c.require(worst < 1e-3, "final norm " + num(worst));
  c.require(violations == 0, std::to_string(violations) + " argmin violations");
  c.note("final norm " + num(worst));
  return c.outcome();
}

Outcome criterion10() {
  Checker c;
  const auto sys = presets::example1().linear_part();
  const auto ks = default_k_list();
  c.require(dwell_bound_holds(sys, kHalf, 1e-4, ks), "bound fails at eta 1e-4");

  const EtaSearchResult search = max_stable_eta(sys, kHalf, 5.0, 200);
  double first_unstable = std::numeric_limits<double>::infinity();
  for (const auto& s : search.grid) {
    if (!(s.spectral_radius < 1.0)) {
      first_unstable = s.eta;
      break;
    }
  }
  double first_fail = std::numeric_limits<double>::infinity();
  for (const auto& s : search.grid) {
    if (!dwell_bound_holds(sys, kHalf, s.eta, ks)) {
      first_fail = s.eta;
      break;
    }
  }
  c.require(first_fail <= first_unstable,
            "bound first fails at " + num(first_fail) + ", rho reaches 1 at " +
                num(first_unstable));
  c.note("bound fails at " + num(first_fail) + ", rho reaches 1 at " + num(first_unstable));
  return c.outcome();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "first example common equilibrium", 1.0, criterion1},
      {2, "first example stable and convergent", 5.0, criterion2},
      {3, "second example equilibria", 1.0, criterion3},
      {4, "second example limit cycle", 10.0, criterion4},
      {5, "average-system deviation is first order", 2.0, criterion5},
      {6, "monodromy determinant oracle and permutation invariance", 10.0, criterion6},
      {7, "monodromy spectrum invariant under rotation and shift", 5.0, criterion7},
      {8, "Lie product formula halves its error", 5.0, criterion8},
      {9, "norm-minimising policy stabilises", 10.0, criterion9},
      {10, "dwell-time bound is conservative", 5.0, criterion10},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_s) {
      out.ok = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("took ") + num(secs) +
                    " s, limit " + num(cr.budget_s) + " s";
    }
    std::printf("[%s] %2d %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    if (!out.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

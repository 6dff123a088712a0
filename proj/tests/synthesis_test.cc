#include "doctest.h"

#include "ici/errors.h"
#include "ici/signals.h"
#include "ici/stability.h"
#include "ici/synthesis.h"
#include "test_util.h"

using namespace ici;
using ici::testing::a1;
using ici::testing::a2;
using ici::testing::linear_example;

TEST_CASE("stable combination of the example matrices") {
  const std::vector<Matrix> mats{a1(), a2()};
  const CombinationResult r = find_stable_combination(mats, 0.01, true);
  CHECK(r.found);
  CHECK(r.abscissa < 0.0);
  // The midpoint is on the lattice and has abscissa -0.5, so the search can
  // only do at least as well.
  CHECK(spectral_abscissa(0.5 * a1() + 0.5 * a2()) == doctest::Approx(-0.5));
  CHECK(r.abscissa <= -0.5 + 1e-12);
  CHECK(r.evaluations >= 101);

  // Re-verify the reported weights independently.
  const Matrix combo = r.weights[0] * a1() + r.weights[1] * a2();
  CHECK(spectral_abscissa(combo) == doctest::Approx(r.abscissa).epsilon(1e-9));
}

TEST_CASE("refinement never worsens the lattice optimum") {
  const std::vector<Matrix> mats{a1(), a2()};
  const auto coarse = find_stable_combination(mats, 0.1, false);
  const auto refined = find_stable_combination(mats, 0.1, true);
  CHECK(refined.abscissa <= coarse.abscissa);
  CHECK(refined.evaluations > coarse.evaluations);
}

TEST_CASE("single stable matrix") {
  const Matrix stable = (Matrix(2, 2) << -1.0, 0.0, 2.0, -3.0).finished();
  const std::vector<Matrix> mats{stable};
  const auto r = find_stable_combination(mats);
  CHECK(r.found);
  CHECK(r.weights.size() == 1);
  CHECK(r.weights[0] == 1.0);
}

TEST_CASE("no stable combination when a diagonal entry is pinned at one") {
  const std::vector<Matrix> mats{Matrix::Identity(2, 2),
                                 Vector{{1.0, -1.0}}.asDiagonal().toDenseMatrix()};
  const auto r = find_stable_combination(mats, 0.01, true);
  CHECK_FALSE(r.found);
  CHECK(r.abscissa >= 1.0 - 1e-12);
}

TEST_CASE("three-matrix search finds a stable interior mixture") {
  // Each matrix alone is unstable; the equal mixture is -I.
  const Matrix b1 = (Matrix(2, 2) << 1.0, 0.0, 0.0, -4.0).finished();
  const Matrix b2 = (Matrix(2, 2) << -4.0, 0.0, 0.0, 1.0).finished();
  const Matrix b3 = (Matrix(2, 2) << 0.0, 3.0, -3.0, 0.0).finished();
  const std::vector<Matrix> mats{b1, b2, b3};
  const auto r = find_stable_combination(mats, 0.05, true);
  CHECK(r.found);
  Matrix combo = Matrix::Zero(2, 2);
  for (std::size_t i = 0; i < 3; ++i) combo += r.weights[i] * mats[i];
  CHECK(spectral_abscissa(combo) < 0.0);
}

TEST_CASE("search input validation") {
  const std::vector<Matrix> none;
  CHECK_THROWS_AS(find_stable_combination(none), InvalidArgument);
  const std::vector<Matrix> mixed{Matrix::Identity(2, 2), Matrix::Identity(3, 3)};
  CHECK_THROWS_AS(find_stable_combination(mixed), DimensionError);
  const std::vector<Matrix> one{Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(find_stable_combination(one, 0.0), InvalidArgument);
}

TEST_CASE("largest stable eta for the example signal shape") {
  const Weights w({0.5, 0.5}, 4.0);
  Tolerances tol;
  const EtaSearchResult r = max_stable_eta(linear_example(), w, 5.0, 200, tol);
  CHECK(r.stable_prefix);
  CHECK(r.grid.size() == 200);
  CHECK(r.eta_star >= 1.1);
  CHECK(r.eta_star < 5.0);
  // Just below eta* is stable, and the signal keeps the requested fractions.
  const PeriodicSignal sig = from_weights(w, r.eta_star * (1 - tol.refine));
  CHECK(is_ici_stable(linear_example(), sig).is_stable);
  const Weights back = activation_fractions(sig, 2);
  CHECK(std::abs(back[0] - w[0]) <= 1e-12);
  CHECK(std::abs(back[1] - w[1]) <= 1e-12);
  // Just above the bracket is unstable.
  CHECK_FALSE(is_ici_stable(linear_example(), from_weights(w, r.eta_star * (1 + 2 * tol.refine)))
                  .is_stable);
  for (const auto& s : r.grid) {
    if (s.eta <= r.eta_star) CHECK(s.spectral_radius < 1.0);
  }
}

TEST_CASE("doubling the grid does not lower eta star") {
  const Weights w({0.5, 0.5}, 4.0);
  Tolerances tol;
  const double coarse = max_stable_eta(linear_example(), w, 5.0, 50, tol).eta_star;
  const double fine = max_stable_eta(linear_example(), w, 5.0, 100, tol).eta_star;
  CHECK(fine >= coarse * (1 - tol.refine) - tol.refine);
}

TEST_CASE("every eta is stable for a single stable subsystem or commuting stable average") {
  const Matrix stable = (Matrix(2, 2) << -1.0, 4.0, 0.0, -2.0).finished();
  const SwitchedSystem single({SubSystem(stable)});
  CHECK(max_stable_eta(single, Weights({1.0}, 1.0), 7.0, 20).eta_star == 7.0);

  const Matrix d1 = Vector{{0.5, -3.0}}.asDiagonal().toDenseMatrix();
  const Matrix d2 = Vector{{-2.0, 0.4}}.asDiagonal().toDenseMatrix();
  const SwitchedSystem commuting({SubSystem(d1), SubSystem(d2)});
  const auto r = max_stable_eta(commuting, Weights({0.5, 0.5}, 1.0), 20.0, 40);
  CHECK(r.eta_star == 20.0);
  CHECK(r.stable_prefix);
}

TEST_CASE("eta search requires a stable average") {
  const std::vector<SubSystem> subs{SubSystem(Matrix::Identity(2, 2))};
  CHECK_THROWS_AS(max_stable_eta(SwitchedSystem(subs), Weights({1.0}, 1.0), 1.0, 10),
                  InstabilityError);
}

TEST_CASE("default eta max") {
  const Weights w({0.5, 0.5}, 1.0);
  CHECK(default_eta_max(linear_example(), w) ==
        doctest::Approx(10.0 / operator_norm_2(0.5 * (a1() + a2()))));
}

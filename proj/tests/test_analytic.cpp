#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "specorder/analytic.hpp"
#include "specorder/errors.hpp"

using namespace specorder;
using namespace specorder::analytic;

namespace {

constexpr double kGrid[] = {0.5, 1.0, 2.0};

// Golden-section minimum of a unimodal function on [lo, hi].
double golden_min(double (*f)(double, int, int), int n, int l, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    if (f(c, n, l) < f(d, n, l)) {
      hi = d;
    } else {
      lo = c;
    }
    c = hi - g * (hi - lo);
    d = lo + g * (hi - lo);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quantum-number combinations") {
  CHECK(q_ho(0, 0) == 1.5);
  CHECK(q_ho(1, 2) == 5.5);
  CHECK(q_coulomb(2, 1) == 4.0);
  CHECK_THROWS_AS(q_ho(-1, 0), ValidationError);
  CHECK_THROWS_AS(q_coulomb(0, -1), ValidationError);
}

TEST_CASE("oscillator and Coulomb spectra") {
  CHECK(ho_energy(1.0, 0.5, 0, 0) == 1.5);
  CHECK(ho_energy(1.0, 0.5, 1, 2) == 5.5);
  CHECK(ho_energy(2.0, 1.0, 0, 0) == 1.5);
  CHECK(coulomb_energy(1.0, 1.0, 0, 0) == -0.5);
  CHECK(coulomb_energy(1.0, 1.0, 0, 1) == -0.125);
  CHECK(coulomb_energy(1.0, 1.0, 1, 0) == -0.125);
  CHECK_THROWS_AS(ho_energy(0.0, 1.0, 0, 0), ValidationError);
  CHECK_THROWS_AS(coulomb_energy(1.0, -1.0, 0, 0), ValidationError);
}

TEST_CASE("tangent-harmonic difference") {
  CHECK(tangent_harmonic_difference(1.0, 1.0, 1.0) == 0.0);
  CHECK(tangent_harmonic_difference(1.0, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  // blows up like κ/r near the origin
  CHECK(tangent_harmonic_difference(1.0, 1.0, 1e-8) * 1e-8 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(tangent_harmonic_difference(1.0, 1.0, 0.0), ValidationError);

  for (double kappa : kGrid)
    for (double r0 : kGrid)
      for (double r : {0.01, 0.3, 0.99, 1.7, 5.0, 40.0}) {
        const double direct = tangent_harmonic_potential(kappa, r0, r) + kappa / r;
        CHECK(tangent_harmonic_difference(kappa, r0, r) ==
              doctest::Approx(direct).epsilon(1e-12).scale(kappa / r0));
        CHECK(tangent_harmonic_difference(kappa, r0, r) >= 0.0);
      }
}

TEST_CASE("tangency: value and slope vanish at r0") {
  for (double kappa : kGrid)
    for (double r0 : kGrid) {
      CHECK(tangent_harmonic_difference(kappa, r0, r0) == 0.0);
      const double h = 1e-6;
      const double slope =
          (tangent_harmonic_difference(kappa, r0, r0 + h) - tangent_harmonic_difference(kappa, r0, r0 - h)) / (2 * h);
      CHECK(std::abs(slope) <= 1e-8);
    }
}

TEST_CASE("level difference") {
  CHECK(level_difference(1.0, 1.0, 1.0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  const double cross = ho_energy(1.0, 0.5, 0, 0) - 1.5 - coulomb_energy(1.0, 1.0, 0, 0);
  CHECK(cross == doctest::Approx(0.5));
  CHECK(tangency_parameter(2.0, 0.5, 4.0) == 2.0);
}

TEST_CASE("level difference agrees with the direct spectra and stays positive") {
  for (double kappa : kGrid)
    for (double mu : kGrid)
      for (double r0 : kGrid)
        for (int n = 0; n <= 5; ++n)
          for (int l = 0; n + l <= 5; ++l) {
            const double lambda = kappa / (2.0 * r0 * r0 * r0);
            const double direct = ho_energy(mu, lambda, n, l) - 1.5 * kappa / r0 - coulomb_energy(mu, kappa, n, l);
            const double closed = level_difference(kappa, mu, r0, n, l);
            CHECK(closed > 0.0);
            CHECK(closed == doctest::Approx(direct).epsilon(1e-12));
          }
}

TEST_CASE("bracket polynomial minimum") {
  CHECK(bracket_polynomial_min(0, 0).x == 1.0);
  CHECK(bracket_polynomial_min(0, 0).value == 1.0);
  CHECK(bracket_polynomial_min(0, 1).x == 2.0);
  CHECK(bracket_polynomial_min(0, 1).value == 4.0);

  for (int n = 0; n <= 5; ++n)
    for (int l = 0; n + l <= 5; ++l) {
      const auto m = bracket_polynomial_min(n, l);
      CHECK(m.value > 0.0);
      // dense scan then golden-section refinement on x ∈ (0, 10]
      double best = 1e-3;
      for (int i = 1; i <= 10000; ++i) {
        const double x = 1e-3 * i;
        if (bracket_polynomial(x, n, l) < bracket_polynomial(best, n, l)) best = x;
      }
      const double x = golden_min(bracket_polynomial, n, l, std::max(1e-3, best - 1e-3), best + 1e-3);
      CHECK(x == doctest::Approx(m.x).epsilon(1e-6));
      CHECK(bracket_polynomial(x, n, l) == doctest::Approx(m.value).epsilon(1e-6));
    }
}

TEST_CASE("semirelativistic Coulomb bound and rest-mass spectrum") {
  const auto bound = salpeter_coulomb_bound(1.0, 0.5, 0, 0);
  CHECK_FALSE(bound.at_boundary);
  CHECK(bound.value == doctest::Approx(1.9364917).epsilon(1e-7));
  CHECK(bound.value == doctest::Approx(2.0 * std::sqrt(0.9375)).epsilon(1e-15));
  CHECK(nonrel_rest_coulomb(1.0, 0.5, 0, 0) == 1.9375);

  const double gap = 1.9375 * 1.9375 - bound.value * bound.value;
  CHECK(gap == doctest::Approx(1.0 / 256.0).epsilon(1e-12));
  CHECK(salpeter_gap_identity(1.0, 0.5, 0, 0) == 1.0 / 256.0);

  // free limit
  CHECK(salpeter_coulomb_bound(3.0, 1e-9, 0, 0).value == doctest::Approx(6.0));
  CHECK(nonrel_rest_coulomb(3.0, 1e-9, 0, 0) == doctest::Approx(6.0));

  // reality boundary κ = 2Q_c
  const auto edge = salpeter_coulomb_bound(1.0, 2.0, 0, 0);
  CHECK(edge.at_boundary);
  CHECK(edge.value == 0.0);
  CHECK_THROWS_AS(salpeter_coulomb_bound(1.0, 2.5, 0, 0), ValidationError);
  CHECK_NOTHROW(salpeter_coulomb_bound(1.0, 2.5, 0, 1));
}

TEST_CASE("rest-mass spectrum lies above the bound and the gap identity holds") {
  for (double m : kGrid)
    for (double kappa : kGrid)
      for (int n = 0; n <= 5; ++n)
        for (int l = 0; n + l <= 5; ++l) {
          const auto bound = salpeter_coulomb_bound(m, kappa, n, l);
          const double e2 = nonrel_rest_coulomb(m, kappa, n, l);
          if (bound.at_boundary) continue;
          CHECK(e2 > bound.value);
          const double lhs = e2 * e2 - bound.value * bound.value;
          CHECK(lhs == doctest::Approx(salpeter_gap_identity(m, kappa, n, l)).epsilon(1e-12));
        }
}

#pragma once

// Closed-form two-body spectra and the identities used to cross-check the
// numerics: harmonic oscillator, Coulomb, the Coulomb/tangent-harmonic pair
// and the semirelativistic Coulomb bound. Natural units.

namespace specorder::analytic {

/// 2n + l + 3/2
double q_ho(int n, int l);
/// n + l + 1
double q_coulomb(int n, int l);

/// p²/(2μ) + λr²: √(2λ/μ)·(2n+l+3/2).
double ho_energy(double mu, double lambda, int n, int l);

/// p²/(2μ) - κ/r: -μκ²/(2(n+l+1)²).
double coulomb_energy(double mu, double kappa, int n, int l);

/// Tangent harmonic potential κr²/(2r₀³) - 3κ/(2r₀).
double tangent_harmonic_potential(double kappa, double r0, double r);

/// V_tangent(r) - V_coulomb(r) in factored form (κ/2r)(r/r₀-1)²(r/r₀+2) ≥ 0.
double tangent_harmonic_difference(double kappa, double r0, double r);

/// x = √(κμr₀)
double tangency_parameter(double kappa, double mu, double r0);

/// x³ - 3Q_c²x + 2Q_ho·Q_c²
double bracket_polynomial(double x, int n, int l);

/// E_tangent - E_coulomb for level (n,l) from the bracket polynomial form.
double level_difference(double kappa, double mu, double r0, int n, int l);

struct BracketMinimum {
  double x = 0.0;      // location, equals Q_c
  double value = 0.0;  // 2Q_c²(Q_ho - Q_c) > 0
};
BracketMinimum bracket_polynomial_min(int n, int l);

struct SalpeterBound {
  double value = 0.0;
  bool at_boundary = false;  // κ = 2Q_c, where the bound collapses to 0
};

/// Upper bound 2m√(1 - κ²/(4Q_c²)) on the ground level of 2√(p²+m²) - κ/r
/// in the (n,l) channel. Requires κ ≤ 2Q_c.
SalpeterBound salpeter_coulomb_bound(double m, double kappa, int n, int l);

/// 2m - mκ²/(4Q_c²): the spectrum of 2m + p²/m - κ/r.
double nonrel_rest_coulomb(double m, double kappa, int n, int l);

/// m²κ⁴/(16 Q_c⁴), which equals E_nonrel² - bound².
double salpeter_gap_identity(double m, double kappa, int n, int l);

}  // namespace specorder::analytic

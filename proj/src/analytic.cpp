#include "specorder/analytic.hpp"

#include <cmath>
#include <sstream>

#include "specorder/errors.hpp"

namespace specorder::analytic {
namespace {

void require_quantum_numbers(int n, int l) {
  if (n < 0 || l < 0) {
    std::ostringstream msg;
    msg << "quantum numbers must be non-negative, got n=" << n << " l=" << l;
    throw ValidationError(msg.str());
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

double q_ho(int n, int l) {
  require_quantum_numbers(n, l);
  return 2.0 * n + l + 1.5;
}

double q_coulomb(int n, int l) {
  require_quantum_numbers(n, l);
  return n + l + 1.0;
}

double ho_energy(double mu, double lambda, int n, int l) {
  require_positive(mu, "mu");
  require_positive(lambda, "lambda");
  return std::sqrt(2.0 * lambda / mu) * q_ho(n, l);
}

double coulomb_energy(double mu, double kappa, int n, int l) {
  require_positive(mu, "mu");
  require_positive(kappa, "kappa");
  const double q = q_coulomb(n, l);
  return -mu * kappa * kappa / (2.0 * q * q);
}

double tangent_harmonic_potential(double kappa, double r0, double r) {
  return kappa / (2.0 * r0 * r0 * r0) * r * r - 1.5 * kappa / r0;
}

double tangent_harmonic_difference(double kappa, double r0, double r) {
  require_positive(kappa, "kappa");
  require_positive(r0, "r0");
  if (!(r > 0.0)) throw ValidationError("tangent_harmonic_difference: r must be positive");
  const double u = r / r0;
  return kappa / (2.0 * r) * (u - 1.0) * (u - 1.0) * (u + 2.0);
}

double tangency_parameter(double kappa, double mu, double r0) {
  require_positive(kappa, "kappa");
  require_positive(mu, "mu");
  require_positive(r0, "r0");
  return std::sqrt(kappa * mu * r0);
}

double bracket_polynomial(double x, int n, int l) {
  const double qc2 = q_coulomb(n, l) * q_coulomb(n, l);
  return x * x * x - 3.0 * qc2 * x + 2.0 * q_ho(n, l) * qc2;
}

double level_difference(double kappa, double mu, double r0, int n, int l) {
  const double x = tangency_parameter(kappa, mu, r0);
  const double qc = q_coulomb(n, l);
  return std::sqrt(kappa) * bracket_polynomial(x, n, l) / (2.0 * r0 * std::sqrt(mu * r0) * qc * qc);
}

BracketMinimum bracket_polynomial_min(int n, int l) {
  const double qc = q_coulomb(n, l);
  return {qc, 2.0 * qc * qc * (q_ho(n, l) - qc)};
}

SalpeterBound salpeter_coulomb_bound(double m, double kappa, int n, int l) {
  require_positive(m, "m");
  require_positive(kappa, "kappa");
  const double qc = q_coulomb(n, l);
  const double arg = 1.0 - kappa * kappa / (4.0 * qc * qc);
  if (kappa == 2.0 * qc) return {0.0, true};
  if (arg < 0.0) {
    std::ostringstream msg;
    msg << "salpeter_coulomb_bound: kappa=" << kappa << " exceeds 2(n+l+1)=" << 2.0 * qc;
    throw ValidationError(msg.str());
  }
  return {2.0 * m * std::sqrt(arg), false};
}

double nonrel_rest_coulomb(double m, double kappa, int n, int l) {
  require_positive(m, "m");
  require_positive(kappa, "kappa");
  const double qc = q_coulomb(n, l);
  return 2.0 * m - m * kappa * kappa / (4.0 * qc * qc);
}

double salpeter_gap_identity(double m, double kappa, int n, int l) {
  require_positive(m, "m");
  require_positive(kappa, "kappa");
  const double qc2 = q_coulomb(n, l) * q_coulomb(n, l);
  return m * m * kappa * kappa * kappa * kappa / (16.0 * qc2 * qc2);
}

}  // namespace specorder::analytic

#include "specorder/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "specorder/errors.hpp"

namespace specorder::oracle {
namespace {

void require_size(const linalg::SymMatrix& a, std::size_t n, const char* what) {
  if (a.size() != n) throw ValidationError(std::string(what) + ": wrong matrix size");
}

double bisect(const linalg::SymMatrix& a, double lo, double hi) {
  double flo = characteristic_polynomial(a, lo);
  if (flo == 0.0) return lo;
  const double fhi = characteristic_polynomial(a, hi);
  if (fhi == 0.0) return hi;
  // A sign change may be lost to rounding at a double root; the bracket end
  // with the smaller |p| is then the best estimate.
  if ((flo > 0.0) == (fhi > 0.0)) return std::abs(flo) < std::abs(fhi) ? lo : hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = characteristic_polynomial(a, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

using Dense = std::vector<double>;

Dense multiply(const Dense& x, const Dense& y, std::size_t n) {
  Dense out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double xik = x[i * n + k];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += xik * y[k * n + j];
    }
  return out;
}

}  // namespace

double characteristic_polynomial(const linalg::SymMatrix& a, double lambda) {
  require_size(a, 3, "characteristic_polynomial");
  const double m00 = lambda - a(0, 0), m01 = -a(0, 1), m02 = -a(0, 2);
  const double m10 = -a(1, 0), m11 = lambda - a(1, 1), m12 = -a(1, 2);
  const double m20 = -a(2, 0), m21 = -a(2, 1), m22 = lambda - a(2, 2);
  return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) + m02 * (m10 * m21 - m11 * m20);
}

std::array<double, 3> cubic_eigenvalues(const linalg::SymMatrix& a) {
  require_size(a, 3, "cubic_eigenvalues");
  // p(λ) = λ³ - c2λ² + c1λ - c0, so p'(λ) = 3λ² - 2c2λ + c1.
  const double c2 = a.trace();
  const double c1 = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1) + a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2) +
                    a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
  double radius = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 3; ++j) row += std::abs(a(i, j));
    radius = std::max(radius, row);
  }
  radius = 2.0 * radius + 1.0;

  const double disc = c2 * c2 - 3.0 * c1;
  const double root = disc > 0.0 ? std::sqrt(disc) : 0.0;
  const double x1 = (c2 - root) / 3.0;  // local maximum of p
  const double x2 = (c2 + root) / 3.0;  // local minimum of p
  return {bisect(a, -radius, x1), bisect(a, x1, x2), bisect(a, x2, radius)};
}

SeriesResult sqrt_shift_series(const linalg::SymMatrix& a, double shift, double scale) {
  const std::size_t n = a.size();
  if (n == 0) throw ValidationError("sqrt_shift_series: empty matrix");
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += std::abs(a(i, j));
    lo = std::min(lo, a(i, i) - r);
    hi = std::max(hi, a(i, i) + r);
  }
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double s = centre + shift;
  if (!(s > 0.0) || !(half < s)) throw ValidationError("sqrt_shift_series: series does not converge");
  const double rho = half / s;

  // scale·√s·Σ_k C(1/2,k) B^k with B = (A - centre·I)/s and ‖B‖₂ ≤ ρ.
  Dense b(n * n), power(n * n, 0.0), sum(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b[i * n + j] = (a(i, j) - (i == j ? centre : 0.0)) / s;
    power[i * n + i] = 1.0;
  }
  double coeff = 1.0;
  double rho_k = 1.0;
  int k = 0;
  for (; k < 2000; ++k) {
    for (std::size_t i = 0; i < n * n; ++i) sum[i] += coeff * power[i];
    coeff *= (0.5 - k) / (k + 1.0);
    rho_k *= rho;
    if (std::abs(coeff) * rho_k < 1e-18) break;
    power = multiply(power, b, n);
  }
  const double prefactor = scale * std::sqrt(s);
  SeriesResult out{linalg::SymMatrix(n), 0.0, k + 1};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.value.set(i, j, prefactor * 0.5 * (sum[i * n + j] + sum[j * n + i]));
  // |C(1/2,k)| ≤ 1 for k ≥ 1, so the tail is at most ρ^(K+1)/(1-ρ).
  out.remainder_bound = prefactor * rho_k * rho / (1.0 - rho);
  return out;
}

}  // namespace specorder::oracle

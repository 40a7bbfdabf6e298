#include "specorder/radial_basis.hpp"

#include <cmath>
#include <sstream>

#include "specorder/errors.hpp"

namespace specorder::basis {

void BasisSpec::validate() const {
  if (l < 0) throw ValidationError("basis: l must be >= 0, got " + std::to_string(l));
  if (size < 2) throw ValidationError("basis: size must be >= 2, got " + std::to_string(size));
  if (!(b > 0.0) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "basis: oscillator length b must be positive and finite, got " << b;
    throw ValidationError(msg.str());
  }
}

namespace {

constexpr double kRescaleAbove = 1e150;
const double kLogRescale = std::log(kRescaleAbove);

// Orthonormal Laguerre polynomials under t^alpha e^(-t) at one point.
// vals[j]·exp(log_scale) = p_j(t) for j < vals.size().
double orthonormal_values(double alpha, double t, std::span<double> vals) {
  double log_scale = -0.5 * std::lgamma(alpha + 1.0);
  if (vals.empty()) return log_scale;
  vals[0] = 1.0;
  if (vals.size() > 1) vals[1] = (alpha + 1.0 - t) / std::sqrt(1.0 + alpha);
  for (std::size_t j = 1; j + 1 < vals.size(); ++j) {
    const double jd = static_cast<double>(j);
    vals[j + 1] = ((2.0 * jd + alpha + 1.0 - t) * vals[j] - std::sqrt(jd * (jd + alpha)) * vals[j - 1]) /
                  std::sqrt((jd + 1.0) * (jd + 1.0 + alpha));
    if (std::abs(vals[j + 1]) > kRescaleAbove) {
      for (std::size_t i = 0; i <= j + 1; ++i) vals[i] /= kRescaleAbove;
      log_scale += kLogRescale;
    }
  }
  return log_scale;
}

// Newton correction p_M(t)/p_M'(t) for the degree-M orthonormal polynomial.
double newton_step(double alpha, double t, std::size_t m) {
  double q0 = 1.0, d0 = 0.0;
  double q1 = (alpha + 1.0 - t) / std::sqrt(1.0 + alpha);
  double d1 = -1.0 / std::sqrt(1.0 + alpha);
  for (std::size_t j = 1; j < m; ++j) {
    const double jd = static_cast<double>(j);
    const double a = 2.0 * jd + alpha + 1.0 - t;
    const double bj = std::sqrt(jd * (jd + alpha));
    const double bn = std::sqrt((jd + 1.0) * (jd + 1.0 + alpha));
    const double q2 = (a * q1 - bj * q0) / bn;
    const double d2 = (a * d1 - q1 - bj * d0) / bn;
    q0 = q1;
    d0 = d1;
    q1 = q2;
    d1 = d2;
    const double big = std::max(std::abs(q1), std::abs(d1));
    if (big > kRescaleAbove) {
      q0 /= kRescaleAbove;
      d0 /= kRescaleAbove;
      q1 /= kRescaleAbove;
      d1 /= kRescaleAbove;
    }
  }
  if (m == 0 || d1 == 0.0) return 0.0;
  return q1 / d1;
}

}  // namespace

GaussLaguerreRule gauss_laguerre(double alpha, std::size_t nodes) {
  if (!(alpha > -1.0)) {
    std::ostringstream msg;
    msg << "gauss_laguerre: weight exponent must exceed -1, got " << alpha;
    throw ValidationError(msg.str());
  }
  if (nodes == 0) throw ValidationError("gauss_laguerre: need at least one node");

  std::vector<double> diag(nodes), off(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) diag[k] = 2.0 * static_cast<double>(k) + alpha + 1.0;
  for (std::size_t k = 1; k < nodes; ++k) {
    const double kd = static_cast<double>(k);
    off[k - 1] = -std::sqrt(kd * (kd + alpha));
  }

  GaussLaguerreRule rule;
  rule.alpha = alpha;
  rule.nodes = linalg::tridiagonal_eigenvalues(std::move(diag), off);

  // Eigenvalues carry absolute error ~eps·4M; polish the small nodes.
  for (double& t : rule.nodes) {
    for (int it = 0; it < 2; ++it) {
      const double step = newton_step(alpha, t, nodes);
      if (std::isfinite(step) && std::abs(step) < 1e-6 * std::max(1.0, t)) t -= step;
    }
    if (!(t > 0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "gauss_laguerre: non-positive node " << t << " (alpha " << alpha << ", " << nodes << " nodes)";
      throw NumericError(msg.str());
    }
  }

  // Christoffel numbers: 1/w_k = Σ_{j<M} p_j(t_k)².
  rule.log_weights.resize(nodes);
  std::vector<double> vals(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double log_scale = orthonormal_values(alpha, rule.nodes[k], vals);
    double sum = 0.0;
    for (double v : vals) sum += v * v;
    rule.log_weights[k] = -std::log(sum) - 2.0 * log_scale;
  }
  return rule;
}

BasisSamples sample_basis(int l, std::size_t size, double leading_power, std::size_t points) {
  const double alpha = l + 0.5;
  const double rule_alpha = alpha + 0.5 * leading_power;
  if (!(rule_alpha > -1.0)) {
    std::ostringstream msg;
    msg << "leading power " << leading_power << " is not integrable against r^2 dr for l=" << l;
    throw ValidationError(msg.str());
  }
  const auto rule = gauss_laguerre(rule_alpha, points);

  BasisSamples s;
  s.size = size;
  s.points = points;
  s.nodes = rule.nodes;
  s.values.assign(size * points, 0.0);
  std::vector<double> vals(size);
  for (std::size_t k = 0; k < points; ++k) {
    const double log_scale = orthonormal_values(alpha, rule.nodes[k], vals);
    const double factor = std::exp(0.5 * rule.log_weights[k] + log_scale);
    for (std::size_t n = 0; n < size; ++n) s.values[n * points + k] = vals[n] * factor;
  }
  return s;
}

SymMatrix r2_matrix(const BasisSpec& basis) {
  basis.validate();
  const std::size_t n = basis.size;
  const double b2 = basis.b * basis.b;
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double id = static_cast<double>(i);
    m.set(i, i, b2 * (2.0 * id + basis.l + 1.5));
    if (i > 0) m.set(i - 1, i, -b2 * std::sqrt(id * (id + basis.l + 0.5)));
  }
  return m;
}

SymMatrix p2_matrix(const BasisSpec& basis) {
  basis.validate();
  const std::size_t n = basis.size;
  const double inv_b2 = 1.0 / (basis.b * basis.b);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double id = static_cast<double>(i);
    m.set(i, i, inv_b2 * (2.0 * id + basis.l + 1.5));
    if (i > 0) m.set(i - 1, i, inv_b2 * std::sqrt(id * (id + basis.l + 0.5)));
  }
  return m;
}

namespace {

void flip_odd_rows(BasisSamples& s) {
  for (std::size_t n = 1; n < s.size; n += 2)
    for (std::size_t k = 0; k < s.points; ++k) s.values[n * s.points + k] = -s.values[n * s.points + k];
}

std::size_t node_count(const BasisSpec& basis, const MeshOptions& options) {
  return basis.size + options.extra_nodes.value_or(basis.size);
}

}  // namespace

SymMatrix power_matrix(const BasisSpec& basis, double exponent, Execution exec) {
  basis.validate();
  if (exponent == 0.0) return SymMatrix::identity(basis.size);
  if (exponent == 2.0) return r2_matrix(basis);
  const auto s = sample_basis(basis.l, basis.size, exponent, basis.size);
  const std::vector<double> ones(s.points, 1.0);
  auto m = kernels::weighted_gram(s.values, s.size, s.points, ones, exec);
  m *= std::pow(basis.b, exponent);
  return m;
}

SymMatrix momentum_power_matrix(const BasisSpec& basis, double exponent, Execution exec) {
  basis.validate();
  if (exponent == 0.0) return SymMatrix::identity(basis.size);
  if (exponent == 2.0) return p2_matrix(basis);
  auto s = sample_basis(basis.l, basis.size, exponent, basis.size);
  flip_odd_rows(s);
  const std::vector<double> ones(s.points, 1.0);
  auto m = kernels::weighted_gram(s.values, s.size, s.points, ones, exec);
  m *= std::pow(basis.b, -exponent);
  return m;
}

SymMatrix potential_matrix(const BasisSpec& basis, const RadialFunction& v, const MeshOptions& options,
                           Execution exec) {
  basis.validate();
  const auto s = sample_basis(basis.l, basis.size, options.leading_power, node_count(basis, options));
  std::vector<double> g(s.points);
  for (std::size_t k = 0; k < s.points; ++k) {
    const double t = s.nodes[k];
    const double r = basis.b * std::sqrt(t);
    const double vr = v(r);
    if (!std::isfinite(vr) || !(r > 0.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "potential_matrix: V(r) is not finite at mesh point r=" << r;
      throw NumericError(msg.str());
    }
    g[k] = options.leading_power == 0.0 ? vr : vr * std::pow(t, -0.5 * options.leading_power);
  }
  return kernels::weighted_gram(s.values, s.size, s.points, g, exec);
}

SymMatrix kinetic_matrix(const BasisSpec& basis, const linalg::ScalarFunction& t_of_p2, const MeshOptions& options,
                         Execution exec) {
  basis.validate();
  auto s = sample_basis(basis.l, basis.size, options.leading_power, node_count(basis, options));
  flip_odd_rows(s);
  const double inv_b2 = 1.0 / (basis.b * basis.b);
  std::vector<double> g(s.points);
  for (std::size_t k = 0; k < s.points; ++k) {
    const double t = s.nodes[k];
    const double p2 = t * inv_b2;
    const double tv = t_of_p2(p2);
    if (!std::isfinite(tv)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "kinetic_matrix: T(p^2) is not finite at p^2=" << p2;
      throw NumericError(msg.str());
    }
    g[k] = options.leading_power == 0.0 ? tv : tv * std::pow(t, -0.5 * options.leading_power);
  }
  return kernels::weighted_gram(s.values, s.size, s.points, g, exec);
}

}  // namespace specorder::basis

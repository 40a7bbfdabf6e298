#pragma once

// Truncated radial harmonic-oscillator basis at fixed orbital angular
// momentum l, and matrix representations of radial operators in it.
//
// Basis state n has the standard Laguerre phase, so ⟨n-1|r²|n⟩ < 0 and
// ⟨n-1|p²|n⟩ > 0. In the dimensionless variable t = r²/b² the states are
// the polynomials orthonormal under t^(l+1/2) e^(-t); in momentum space the
// same polynomials appear in t = p²b² with an extra (-1)^n.
//
// Operators other than r² and p² are projected with Gauss–Laguerre rules.
// A rule with weight t^(l+1/2+σ/2) e^(-t) integrates r^σ·(polynomial in r²)
// exactly, so power terms r^η are exact Galerkin matrices for every
// η > -(2l+3). The plain rule (σ = 0) with exactly N nodes reproduces the
// spectral function calculus f(R²) = U f(Λ) Uᵀ on the N×N r² matrix.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "specorder/linalg.hpp"
#include "specorder/parallel.hpp"

namespace specorder::basis {

using linalg::SymMatrix;

struct BasisSpec {
  int l = 0;              // orbital angular momentum
  std::size_t size = 2;   // states n = 0..size-1
  double b = 1.0;         // oscillator length

  void validate() const;  // throws ValidationError
};

/// Quadrature control for generic radial or kinetic functions.
struct MeshOptions {
  /// Nodes beyond the basis size. Unset means "same as the basis size"
  /// (2N nodes); 0 gives the literal N×N function calculus.
  std::optional<std::size_t> extra_nodes;
  /// Known small-argument behaviour f ~ x^σ (x = r or p). The rule absorbs
  /// x^σ into its weight, which removes integrable singularities such as
  /// 1/r from the quadrature error.
  double leading_power = 0.0;
};

/// Gauss rule for ∫ t^alpha e^(-t) g(t) dt in the dimensionless variable.
struct GaussLaguerreRule {
  double alpha = 0.0;
  std::vector<double> nodes;        // ascending, positive
  std::vector<double> log_weights;  // natural log of the weights
};

GaussLaguerreRule gauss_laguerre(double alpha, std::size_t nodes);

/// Basis polynomials sampled on a rule: samples[n·M + k] = √w_k · p_n(t_k),
/// where p_n is orthonormal under t^(l+1/2) e^(-t). With the rule built for
/// alpha = l+1/2+σ/2, Σ_k samples(n,k)·samples(m,k)·g(t_k) approximates
/// ∫ t^(l+1/2) e^(-t) p_n p_m t^(σ/2) g(t) dt.
struct BasisSamples {
  std::size_t size = 0;   // basis states
  std::size_t points = 0; // quadrature nodes
  std::vector<double> nodes;
  std::vector<double> values;
};

BasisSamples sample_basis(int l, std::size_t size, double leading_power, std::size_t points);

SymMatrix r2_matrix(const BasisSpec& basis);
SymMatrix p2_matrix(const BasisSpec& basis);

/// ⟨n| r^η |m⟩, exact for η > -(2l+3).
SymMatrix power_matrix(const BasisSpec& basis, double exponent, Execution exec = Execution::parallel);

/// ⟨n| |p|^η |m⟩, exact for η > -(2l+3).
SymMatrix momentum_power_matrix(const BasisSpec& basis, double exponent, Execution exec = Execution::parallel);

using RadialFunction = std::function<double(double)>;

/// ⟨n| V(r) |m⟩ by quadrature. Throws NumericError if V is not finite at
/// a mesh point (the message carries r).
SymMatrix potential_matrix(const BasisSpec& basis, const RadialFunction& v, const MeshOptions& options = {},
                           Execution exec = Execution::parallel);

/// ⟨n| T(p²) |m⟩ by momentum-space quadrature; T takes p² as argument.
SymMatrix kinetic_matrix(const BasisSpec& basis, const linalg::ScalarFunction& t_of_p2,
                         const MeshOptions& options = {}, Execution exec = Execution::parallel);

}  // namespace specorder::basis

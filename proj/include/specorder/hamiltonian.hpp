#pragma once

// Declarative kinetic and potential operators, Hamiltonian assembly in the
// radial oscillator basis, bound-state extraction and variational tuning of
// the oscillator length. Natural units ħ = c = 1 throughout.

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "specorder/parallel.hpp"
#include "specorder/radial_basis.hpp"

namespace specorder::ham {

using basis::BasisSpec;
using linalg::SymMatrix;

// ---- kinetic operators, all functions of p² -------------------------------

struct NonRel {  // p²/(2μ)
  double mu = 1.0;
};
struct NonRelTwoBody {  // 2m + p²/m
  double m = 1.0;
};
struct Salpeter {  // 2√(p²+m²); m = 0 is the ultrarelativistic limit 2|p|
  double m = 1.0;
};
struct CustomKinetic {
  std::function<double(double)> f;  // argument is p²
  std::string label = "custom";
  double leading_power = 0.0;        // f ~ p^σ as p → 0
};

class KineticSpec {
 public:
  using Variant = std::variant<NonRel, NonRelTwoBody, Salpeter, CustomKinetic>;

  template <class Alt>
    requires std::is_constructible_v<Variant, Alt>
  KineticSpec(Alt alt) : v_(std::move(alt)) {}  // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }
  /// T as a function of p² (not of p).
  double operator()(double p2) const;
  std::string describe() const;
  void validate() const;
  /// Massless Salpeter operators are flagged for reporting.
  bool ultrarelativistic() const noexcept;

 private:
  Variant v_;
};

// ---- potentials, functions of r --------------------------------------------

struct Coulomb {  // -κ/r
  double kappa = 1.0;
};
struct Harmonic {  // λ r²
  double lambda = 1.0;
};
struct TangentHarmonic {  // κ r²/(2r₀³) - 3κ/(2r₀), tangent to -κ/r at r₀
  double kappa = 1.0;
  double r0 = 1.0;
};
struct PowerTerm {
  double coupling = 0.0;
  double exponent = 0.0;
};
struct PowerSum {  // Σ g·r^η
  std::vector<PowerTerm> terms;
};
struct CustomPotential {
  std::function<double(double)> v;
  std::string label = "custom";
  double leading_power = 0.0;  // v ~ r^σ as r → 0
};

class PotentialSpec;

struct Scaled {  // g·v(r)
  double g = 1.0;
  std::shared_ptr<const PotentialSpec> inner;
};

class PotentialSpec {
 public:
  using Variant = std::variant<Coulomb, Harmonic, TangentHarmonic, PowerSum, CustomPotential, Scaled>;

  template <class Alt>
    requires std::is_constructible_v<Variant, Alt>
  PotentialSpec(Alt alt) : v_(std::move(alt)) {}  // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }
  double operator()(double r) const;
  std::string describe() const;
  void validate() const;

 private:
  Variant v_;
};

Scaled scaled(double g, PotentialSpec inner);

/// Potential flattened into exact power terms plus weighted custom parts.
struct PotentialTerms {
  std::vector<PowerTerm> powers;
  std::vector<std::pair<double, const CustomPotential*>> customs;
};
PotentialTerms expand(const PotentialSpec& v);

// ---- assembly and solves -----------------------------------------------------

SymMatrix kinetic_matrix(const KineticSpec& t, const BasisSpec& basis, Execution exec = Execution::parallel);
SymMatrix potential_matrix(const PotentialSpec& v, const BasisSpec& basis, Execution exec = Execution::parallel);

/// Matrix of T + V in the given basis. Throws NumericError if an entry
/// overflows (for example a large power term at large b).
SymMatrix assemble(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis,
                   Execution exec = Execution::parallel);

struct Level {
  int n = 0;  // sorted position inside the fixed-l block
  int l = 0;
  double energy = 0.0;
};

/// Lowest `count` eigenvalues of T + V at the basis' l.
std::vector<Level> solve_levels(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis,
                                std::size_t count, Execution exec = Execution::parallel);

struct ScaleSearch {
  double b_lo = 1e-3;
  double b_hi = 1e3;
  int iterations = 60;   // golden-section steps on log b
  int scan_points = 25;  // coarse log-spaced scan that picks the bracket
};

struct ScaleResult {
  double b = 0.0;
  double energy = 0.0;     // eigenvalue at b, the lowest seen at any probe
  bool bracketed = true;   // false: best probe sits on the search boundary
  std::string warning;
  int evaluations = 0;
};

/// Oscillator length minimising eigenvalue `target` (basis template supplies
/// l and size; its b is ignored).
ScaleResult optimize_basis_scale(const KineticSpec& t, const PotentialSpec& v, const BasisSpec& basis_template,
                                 std::size_t target, const ScaleSearch& search = {},
                                 Execution exec = Execution::parallel);

/// solve_levels with b optimised separately for every level n < count.
struct OptimizedLevel {
  Level level;
  double b = 0.0;
  bool bracketed = true;
};
std::vector<OptimizedLevel> solve_levels_optimized(const KineticSpec& t, const PotentialSpec& v,
                                                   const BasisSpec& basis_template, std::size_t count,
                                                   const ScaleSearch& search = {},
                                                   Execution exec = Execution::parallel);

}  // namespace specorder::ham

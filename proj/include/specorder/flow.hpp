#pragma once

// Executable form of the comparison argument: the straight path
// H(a) = (1-a)H₁ + aH₂, the Hellmann–Feynman derivative ⟨a|H₂-H₁|a⟩ along
// it, positivity of H₂-H₁, and the resulting ordering of the spectra.

#include <compare>
#include <functional>
#include <span>
#include <vector>

#include "specorder/hamiltonian.hpp"
#include "specorder/parallel.hpp"

namespace specorder::flow {

using basis::BasisSpec;
using linalg::SymMatrix;

struct Endpoint {
  ham::KineticSpec kinetic;
  ham::PotentialSpec potential;
};

struct LevelKey {
  int n = 0;
  int l = 0;
  friend auto operator<=>(const LevelKey&, const LevelKey&) = default;
};

struct FlowSpec {
  Endpoint first;
  Endpoint second;
  /// One basis per tracked l; both endpoints are assembled in it.
  std::vector<BasisSpec> bases;
  /// Strictly ascending, starts at 0 and ends at 1, at least 3 points.
  std::vector<double> a_grid;
  std::vector<LevelKey> levels;

  void validate() const;
  const BasisSpec& basis_for(int l) const;
};

std::vector<double> uniform_grid(std::size_t points);
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// FlowSpec whose oscillator length per l minimises the lowest tracked
/// level of the first endpoint; the same b is then used for both endpoints.
FlowSpec make_flow_spec(Endpoint first, Endpoint second, std::vector<LevelKey> levels, std::size_t basis_size,
                        std::size_t grid_points = 101, const ham::ScaleSearch& search = {});

struct FlowOptions {
  /// Extra Richardson levels for refined_derivative (0 disables it).
  int richardson_levels = 3;
  /// Neighbouring eigenvalues closer than this mark a sample degenerate.
  double degeneracy_gap = 1e-10;
  double tolerance = 1e-8;
  Execution exec = Execution::parallel;
};

struct LevelTrack {
  LevelKey key;
  std::vector<double> a;
  std::vector<double> energy;
  std::vector<double> hf_expectation;      // ψᵀ(H₂-H₁)ψ
  std::vector<double> fd_derivative;       // second-order finite differences on the grid
  std::vector<double> refined_derivative;  // Richardson-extrapolated, empty if disabled
  std::vector<bool> degenerate;
};

struct FlowSummary {
  double max_hf_residual = 0.0;       // max |fd - hf| over non-degenerate samples
  double max_refined_residual = 0.0;  // same with refined_derivative
  double min_hf = 0.0;
  bool monotone = true;          // E(a) non-decreasing within tolerance, every track
  bool endpoint_ordered = true;  // E(0) ≤ E(1) + tolerance, every track
  bool hf_nonnegative = true;    // hf ≥ -tolerance, every track
  bool any_degenerate = false;
};

struct FlowResult {
  std::vector<LevelTrack> tracks;
  FlowSummary summary;
};

/// (1-a)·h1 + a·h2, evaluated as h1 + a·(h2-h1) so equal endpoints give a
/// constant path; returns h1 / h2 unchanged at a = 0 / 1.
SymMatrix interpolate(const SymMatrix& h1, const SymMatrix& h2, double a);
SymMatrix interpolated_hamiltonian(const FlowSpec& spec, double a, int l);

/// Smallest eigenvalue of H₂ - H₁ over all bases of the spec.
double psd_gap(const FlowSpec& spec);

/// Tracks the given sorted-eigenvalue indices along the path between two
/// matrices. This is the kernel behind flow_levels.
std::vector<LevelTrack> flow_matrices(const SymMatrix& h1, const SymMatrix& h2, std::span<const LevelKey> levels,
                                      std::span<const double> a_grid, const FlowOptions& options = {});

FlowResult flow_levels(const FlowSpec& spec, const FlowOptions& options = {});

/// Summary statistics over any set of tracks.
FlowSummary summarize(std::span<const LevelTrack> tracks, double tolerance);

struct LevelVerdict {
  LevelKey key;
  double e1 = 0.0;
  double e2 = 0.0;
  double delta = 0.0;  // e2 - e1
  bool endpoint_ordered = false;
  bool monotone = false;
  bool hf_nonnegative = false;
  bool degenerate = false;
};

struct OrderingReport {
  double psd_gap = 0.0;
  double tolerance = 1e-8;
  std::vector<LevelVerdict> levels;
  bool all_ordered() const;
  /// True unless psd_gap ≥ -tol and some verdict fails.
  bool consistent() const;
};

OrderingReport ordering_report(const FlowSpec& spec, double tolerance = 1e-8, FlowOptions options = {});

struct PointwiseVerdict {
  double min_difference = 0.0;  // min over grid of f2 - f1
  double location = 0.0;        // where it is attained (first occurrence)
  bool holds = false;           // min_difference ≥ -tol
};

/// Sampled check f2 ≥ f1 on a non-negative grid. Not a proof.
PointwiseVerdict pointwise_ordering(const std::function<double(double)>& f1, const std::function<double(double)>& f2,
                                    std::span<const double> grid, double tolerance = 1e-8);

struct MatrixComparison {
  double psd_gap = 0.0;
  double worst_violation = 0.0;  // max_k (λ₁_k - λ₂_k)
  bool ordered = false;
};

/// Matrix-level ordering: psd gap of h2 - h1 and the sorted eigenvalue pairs.
MatrixComparison compare_spectra(const SymMatrix& h1, const SymMatrix& h2, double slack = 1e-10);

}  // namespace specorder::flow

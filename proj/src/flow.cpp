#include "specorder/flow.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <sstream>

#include "specorder/errors.hpp"

namespace specorder::flow {

void FlowSpec::validate() const {
  first.kinetic.validate();
  first.potential.validate();
  second.kinetic.validate();
  second.potential.validate();
  if (bases.empty()) throw ValidationError("flow: no basis given");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    bases[i].validate();
    for (std::size_t j = 0; j < i; ++j)
      if (bases[j].l == bases[i].l) throw ValidationError("flow: two bases share l=" + std::to_string(bases[i].l));
  }
  if (a_grid.size() < 3) throw ValidationError("flow: a grid needs at least 3 points");
  if (a_grid.front() != 0.0 || a_grid.back() != 1.0) throw ValidationError("flow: a grid must start at 0 and end at 1");
  for (std::size_t i = 1; i < a_grid.size(); ++i)
    if (!(a_grid[i] > a_grid[i - 1])) throw ValidationError("flow: a grid must be strictly ascending");
  if (levels.empty()) throw ValidationError("flow: no levels to track");
  for (const auto& key : levels) {
    const auto& b = basis_for(key.l);
    if (key.n < 0 || static_cast<std::size_t>(key.n) >= b.size) {
      std::ostringstream msg;
      msg << "flow: level (" << key.n << "," << key.l << ") outside basis of size " << b.size;
      throw ValidationError(msg.str());
    }
  }
}

const BasisSpec& FlowSpec::basis_for(int l) const {
  for (const auto& b : bases)
    if (b.l == l) return b;
  throw ValidationError("flow: no basis for l=" + std::to_string(l));
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw ValidationError("uniform_grid: need at least 2 points");
  std::vector<double> g(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / last;
  g.back() = 1.0;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw ValidationError("log_grid: need 0 < lo < hi and 2+ points");
  std::vector<double> g(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

FlowSpec make_flow_spec(Endpoint first, Endpoint second, std::vector<LevelKey> levels, std::size_t basis_size,
                        std::size_t grid_points, const ham::ScaleSearch& search) {
  std::map<int, int> lowest;  // l -> lowest tracked n
  for (const auto& k : levels) {
    auto [it, inserted] = lowest.emplace(k.l, k.n);
    if (!inserted) it->second = std::min(it->second, k.n);
  }
  FlowSpec spec{std::move(first), std::move(second), {}, uniform_grid(grid_points), std::move(levels)};
  for (const auto& [l, n] : lowest) {
    BasisSpec tmpl{l, basis_size, 1.0};
    const auto r = ham::optimize_basis_scale(spec.first.kinetic, spec.first.potential, tmpl,
                                             static_cast<std::size_t>(n), search);
    spec.bases.push_back({l, basis_size, r.b});
  }
  spec.validate();
  return spec;
}

SymMatrix interpolate(const SymMatrix& h1, const SymMatrix& h2, double a) {
  if (h1.size() != h2.size()) throw ValidationError("interpolate: dimension mismatch");
  if (a == 0.0) return h1;
  if (a == 1.0) return h2;
  const std::size_t n = h1.size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.set(i, j, h1(i, j) + a * (h2(i, j) - h1(i, j)));
  return out;
}

SymMatrix interpolated_hamiltonian(const FlowSpec& spec, double a, int l) {
  if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("interpolated_hamiltonian: a must lie in [0,1]");
  const auto& b = spec.basis_for(l);
  return interpolate(ham::assemble(spec.first.kinetic, spec.first.potential, b),
                     ham::assemble(spec.second.kinetic, spec.second.potential, b), a);
}

double psd_gap(const FlowSpec& spec) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& b : spec.bases) {
    auto d = ham::assemble(spec.second.kinetic, spec.second.potential, b);
    d -= ham::assemble(spec.first.kinetic, spec.first.potential, b);
    gap = std::min(gap, linalg::min_eigenvalue(d));
  }
  return gap;
}

namespace {

struct Sample {
  std::vector<double> energy;
  std::vector<double> hf;
  std::vector<char> degenerate;
  std::vector<double> refined;
};

double local_step(std::span<const double> grid, std::size_t i) {
  const std::size_t last = grid.size() - 1;
  if (i == 0) return grid[1] - grid[0];
  if (i == last) return grid[last] - grid[last - 1];
  return std::min(grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
}

// Richardson table on derivative estimates taken at steps h, h/2, h/4, ...
// whose error expansion has powers first_power, first_power + stride, ...
double richardson(std::vector<double> t, int first_power, int stride) {
  int p = first_power;
  for (std::size_t m = 1; m < t.size(); ++m, p += stride) {
    const double f = std::ldexp(1.0, p);
    for (std::size_t j = 0; j + m < t.size(); ++j) t[j] = (f * t[j + 1] - t[j]) / (f - 1.0);
  }
  return t.front();
}

Sample evaluate_sample(const SymMatrix& h1, const SymMatrix& h2, const SymMatrix& diff,
                       std::span<const LevelKey> levels, std::span<const double> grid, std::size_t i,
                       const FlowOptions& options) {
  const double a = grid[i];
  const auto eig = linalg::eigh(interpolate(h1, h2, a));
  const std::size_t n_levels = levels.size();
  const std::size_t dim = eig.size();

  Sample s;
  s.energy.resize(n_levels);
  s.hf.resize(n_levels);
  s.degenerate.resize(n_levels);
  for (std::size_t k = 0; k < n_levels; ++k) {
    const auto n = static_cast<std::size_t>(levels[k].n);
    s.energy[k] = eig.eigenvalues[n];
    s.hf[k] = linalg::quadratic_form(diff, eig.vector(n));
    double gap = std::numeric_limits<double>::infinity();
    if (n > 0) gap = std::min(gap, eig.eigenvalues[n] - eig.eigenvalues[n - 1]);
    if (n + 1 < dim) gap = std::min(gap, eig.eigenvalues[n + 1] - eig.eigenvalues[n]);
    s.degenerate[k] = gap < options.degeneracy_gap;
  }

  if (options.richardson_levels <= 0) return s;

  const double h = local_step(grid, i);
  const int depth = options.richardson_levels + 1;
  const bool interior = i > 0 && i + 1 < grid.size();
  const double dir = (i == 0) ? 1.0 : -1.0;
  auto values_at = [&](double x) { return linalg::eigvalsh(interpolate(h1, h2, x)); };

  std::vector<std::vector<double>> table(n_levels, std::vector<double>(depth));
  for (int j = 0; j < depth; ++j) {
    const double hj = std::ldexp(h, -j);
    if (interior) {
      const auto ep = values_at(a + hj);
      const auto em = values_at(a - hj);
      for (std::size_t k = 0; k < n_levels; ++k) {
        const auto n = static_cast<std::size_t>(levels[k].n);
        table[k][j] = (ep[n] - em[n]) / (2.0 * hj);
      }
    } else {
      const auto e1 = values_at(a + dir * hj);
      const auto e2 = values_at(a + 2.0 * dir * hj);
      for (std::size_t k = 0; k < n_levels; ++k) {
        const auto n = static_cast<std::size_t>(levels[k].n);
        table[k][j] = dir * (-3.0 * s.energy[k] + 4.0 * e1[n] - e2[n]) / (2.0 * hj);
      }
    }
  }
  s.refined.resize(n_levels);
  for (std::size_t k = 0; k < n_levels; ++k)
    s.refined[k] = interior ? richardson(table[k], 2, 2) : richardson(table[k], 2, 1);
  return s;
}

// Second-order three-point derivative on a possibly non-uniform grid.
std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h2 = x[n - 1] - x[n - 2];
    const double h1 = x[n - 2] - x[n - 3];
    d[n - 1] = (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               h2 / (h1 * (h1 + h2)) * f[n - 3];
  }
  return d;
}

}  // namespace

std::vector<LevelTrack> flow_matrices(const SymMatrix& h1, const SymMatrix& h2, std::span<const LevelKey> levels,
                                      std::span<const double> a_grid, const FlowOptions& options) {
  if (h1.size() != h2.size()) throw ValidationError("flow: endpoint dimensions differ");
  if (a_grid.size() < 3) throw ValidationError("flow: a grid needs at least 3 points");
  for (const auto& k : levels)
    if (k.n < 0 || static_cast<std::size_t>(k.n) >= h1.size())
      throw ValidationError("flow: tracked level index outside matrix");

  auto diff = h2;
  diff -= h1;
  const std::size_t points = a_grid.size();
  std::vector<Sample> samples(points);
  std::vector<std::exception_ptr> errors(points);

  if (options.exec == Execution::parallel) {
    const auto count = static_cast<long long>(points);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        samples[idx] = evaluate_sample(h1, h2, diff, levels, a_grid, idx, options);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < points; ++i) samples[i] = evaluate_sample(h1, h2, diff, levels, a_grid, i, options);
  }

  std::vector<LevelTrack> tracks(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    auto& t = tracks[k];
    t.key = levels[k];
    t.a.assign(a_grid.begin(), a_grid.end());
    t.energy.resize(points);
    t.hf_expectation.resize(points);
    t.degenerate.resize(points);
    if (options.richardson_levels > 0) t.refined_derivative.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      t.energy[i] = samples[i].energy[k];
      t.hf_expectation[i] = samples[i].hf[k];
      t.degenerate[i] = samples[i].degenerate[k] != 0;
      if (options.richardson_levels > 0) t.refined_derivative[i] = samples[i].refined[k];
    }
    t.fd_derivative = grid_derivative(t.a, t.energy);
  }
  return tracks;
}

FlowSummary summarize(std::span<const LevelTrack> tracks, double tolerance) {
  FlowSummary s;
  s.min_hf = std::numeric_limits<double>::infinity();
  for (const auto& t : tracks) {
    const std::size_t points = t.a.size();
    for (std::size_t i = 0; i < points; ++i) {
      s.min_hf = std::min(s.min_hf, t.hf_expectation[i]);
      if (t.hf_expectation[i] < -tolerance) s.hf_nonnegative = false;
      if (t.degenerate[i]) {
        s.any_degenerate = true;
        continue;
      }
      s.max_hf_residual = std::max(s.max_hf_residual, std::abs(t.fd_derivative[i] - t.hf_expectation[i]));
      if (!t.refined_derivative.empty())
        s.max_refined_residual =
            std::max(s.max_refined_residual, std::abs(t.refined_derivative[i] - t.hf_expectation[i]));
    }
    for (std::size_t i = 1; i < points; ++i)
      if (t.energy[i] < t.energy[i - 1] - tolerance) s.monotone = false;
    if (t.energy.front() > t.energy.back() + tolerance) s.endpoint_ordered = false;
  }
  return s;
}

FlowResult flow_levels(const FlowSpec& spec, const FlowOptions& options) {
  spec.validate();
  FlowResult result;
  result.tracks.resize(spec.levels.size());

  for (const auto& b : spec.bases) {
    std::vector<LevelKey> keys;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < spec.levels.size(); ++i)
      if (spec.levels[i].l == b.l) {
        keys.push_back(spec.levels[i]);
        slots.push_back(i);
      }
    if (keys.empty()) continue;
    const auto h1 = ham::assemble(spec.first.kinetic, spec.first.potential, b, options.exec);
    const auto h2 = ham::assemble(spec.second.kinetic, spec.second.potential, b, options.exec);
    auto tracks = flow_matrices(h1, h2, keys, spec.a_grid, options);
    for (std::size_t k = 0; k < tracks.size(); ++k) result.tracks[slots[k]] = std::move(tracks[k]);
  }
  result.summary = summarize(result.tracks, options.tolerance);
  return result;
}

bool OrderingReport::all_ordered() const {
  return std::all_of(levels.begin(), levels.end(), [](const LevelVerdict& v) {
    return v.endpoint_ordered && v.monotone && v.hf_nonnegative;
  });
}

bool OrderingReport::consistent() const { return psd_gap < -tolerance || all_ordered(); }

OrderingReport ordering_report(const FlowSpec& spec, double tolerance, FlowOptions options) {
  options.tolerance = tolerance;
  const auto flow = flow_levels(spec, options);
  OrderingReport report;
  report.tolerance = tolerance;
  report.psd_gap = psd_gap(spec);
  for (const auto& t : flow.tracks) {
    const auto s = summarize(std::span<const LevelTrack>(&t, 1), tolerance);
    LevelVerdict v;
    v.key = t.key;
    v.e1 = t.energy.front();
    v.e2 = t.energy.back();
    v.delta = v.e2 - v.e1;
    v.endpoint_ordered = v.e1 <= v.e2 + tolerance;
    v.monotone = s.monotone;
    v.hf_nonnegative = s.hf_nonnegative;
    v.degenerate = s.any_degenerate;
    report.levels.push_back(v);
  }
  return report;
}

PointwiseVerdict pointwise_ordering(const std::function<double(double)>& f1, const std::function<double(double)>& f2,
                                    std::span<const double> grid, double tolerance) {
  if (grid.empty()) throw ValidationError("pointwise_ordering: empty grid");
  PointwiseVerdict v;
  v.min_difference = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    if (!std::isfinite(x) || x < 0.0) {
      std::ostringstream msg;
      msg << "pointwise_ordering: grid point " << x << " must be finite and non-negative";
      throw ValidationError(msg.str());
    }
    const double a = f1(x);
    const double b = f2(x);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "pointwise_ordering: non-finite evaluation at x=" << x;
      throw NumericError(msg.str());
    }
    if (b - a < v.min_difference) {
      v.min_difference = b - a;
      v.location = x;
    }
  }
  v.holds = v.min_difference >= -tolerance;
  return v;
}

MatrixComparison compare_spectra(const SymMatrix& h1, const SymMatrix& h2, double slack) {
  if (h1.size() != h2.size()) throw ValidationError("compare_spectra: dimension mismatch");
  auto d = h2;
  d -= h1;
  MatrixComparison c;
  c.psd_gap = linalg::min_eigenvalue(d);
  const auto e1 = linalg::eigvalsh(h1);
  const auto e2 = linalg::eigvalsh(h2);
  c.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < e1.size(); ++k) c.worst_violation = std::max(c.worst_violation, e1[k] - e2[k]);
  c.ordered = c.worst_violation <= slack;
  return c;
}

}  // namespace specorder::flow

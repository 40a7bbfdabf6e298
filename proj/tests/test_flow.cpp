#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specorder/analytic.hpp"
#include "specorder/errors.hpp"
#include "specorder/flow.hpp"

using namespace specorder;
using namespace specorder::flow;

namespace {

Endpoint coulomb() { return {ham::NonRel{1.0}, ham::Coulomb{1.0}}; }
Endpoint tangent() { return {ham::NonRel{1.0}, ham::TangentHarmonic{1.0, 1.0}}; }

FlowSpec fixed_spec(Endpoint a, Endpoint b, std::vector<LevelKey> levels, std::size_t size, double length,
                    std::size_t points = 21) {
  std::vector<BasisSpec> bases;
  for (const auto& k : levels) {
    bool seen = false;
    for (const auto& bs : bases) seen = seen || bs.l == k.l;
    if (!seen) bases.push_back({k.l, size, length});
  }
  return {std::move(a), std::move(b), std::move(bases), uniform_grid(points), std::move(levels)};
}

SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, g(rng));
  return a;
}

SymMatrix gram(const std::vector<double>& p, std::size_t rows, std::size_t n) {
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rows; ++k) s += p[k * n + i] * p[k * n + j];
      out.set(i, j, s);
    }
  return out;
}

}  // namespace

TEST_CASE("grids") {
  const auto u = uniform_grid(101);
  CHECK(u.front() == 0.0);
  CHECK(u.back() == 1.0);
  CHECK(u[50] == 0.5);
  const auto g = log_grid(1e-3, 50.0, 200);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 50.0);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK_THROWS_AS(uniform_grid(1), ValidationError);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), ValidationError);
}

TEST_CASE("spec validation") {
  auto spec = fixed_spec(coulomb(), tangent(), {{0, 0}}, 10, 1.0);
  CHECK_NOTHROW(spec.validate());
  auto bad = spec;
  bad.a_grid = {0.0, 0.7, 0.5, 1.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.a_grid = {0.0, 0.5, 0.9};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.levels = {{10, 0}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.levels = {{0, 1}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(interpolated_hamiltonian(spec, 1.5, 0), ValidationError);
}

TEST_CASE("interpolation endpoints and midpoint") {
  const auto spec = fixed_spec(coulomb(), tangent(), {{0, 0}}, 12, 0.8);
  const auto h1 = ham::assemble(coulomb().kinetic, coulomb().potential, spec.bases[0]);
  const auto h2 = ham::assemble(tangent().kinetic, tangent().potential, spec.bases[0]);
  CHECK(interpolated_hamiltonian(spec, 0.0, 0) == h1);
  CHECK(interpolated_hamiltonian(spec, 1.0, 0) == h2);
  const auto mid = interpolated_hamiltonian(spec, 0.5, 0);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) CHECK(mid(i, j) == doctest::Approx(0.5 * (h1(i, j) + h2(i, j))));
}

TEST_CASE("psd gap") {
  CHECK(psd_gap(fixed_spec(coulomb(), coulomb(), {{0, 0}}, 10, 1.0)) == 0.0);
  CHECK(psd_gap(fixed_spec(coulomb(), tangent(), {{0, 0}, {0, 1}}, 40, 0.6)) >= -1e-9);
  const Endpoint salp{ham::Salpeter{1.0}, ham::Coulomb{0.5}};
  const Endpoint rest{ham::NonRelTwoBody{1.0}, ham::Coulomb{0.5}};
  CHECK(psd_gap(fixed_spec(salp, rest, {{0, 0}}, 40, 1.5)) >= -1e-9);
  // reversing the pair exposes a negative direction
  CHECK(psd_gap(fixed_spec(rest, salp, {{0, 0}}, 40, 1.5)) < -1e-6);
}

TEST_CASE("identical endpoints give a flat flow") {
  const auto spec = fixed_spec(coulomb(), coulomb(), {{0, 0}, {1, 0}}, 15, 1.0, 11);
  const auto r = flow_levels(spec);
  for (const auto& t : r.tracks)
    for (std::size_t i = 0; i < t.a.size(); ++i) {
      CHECK(t.energy[i] == t.energy[0]);
      CHECK(t.hf_expectation[i] == 0.0);
      CHECK(t.fd_derivative[i] == doctest::Approx(0.0));
    }
  const auto rep = ordering_report(spec);
  CHECK(rep.all_ordered());
  CHECK(rep.consistent());
  for (const auto& v : rep.levels) CHECK(v.delta == 0.0);
}

TEST_CASE("Coulomb to tangent-harmonic flow") {
  const auto spec = make_flow_spec(coulomb(), tangent(), {{0, 0}}, 40);
  const auto r = flow_levels(spec);
  const auto& t = r.tracks[0];
  CHECK(t.energy.front() == doctest::Approx(-0.5).epsilon(2e-3));
  CHECK(std::abs(t.energy.back()) <= 1e-3);
  CHECK(r.summary.monotone);
  CHECK(r.summary.hf_nonnegative);
  CHECK(r.summary.endpoint_ordered);
  CHECK_FALSE(r.summary.any_degenerate);
  CHECK(r.summary.max_refined_residual <= 1e-5);
  // the plain grid derivative is second order and far coarser
  CHECK(r.summary.max_hf_residual > r.summary.max_refined_residual);
}

TEST_CASE("grid derivative error falls at second order") {
  const auto base = make_flow_spec(coulomb(), tangent(), {{0, 0}}, 40);
  const auto& b = base.bases[0];
  const auto h1 = ham::assemble(coulomb().kinetic, coulomb().potential, b);
  const auto h2 = ham::assemble(tangent().kinetic, tangent().potential, b);
  const std::vector<LevelKey> key{{0, 0}};
  FlowOptions opts;
  opts.richardson_levels = 0;
  std::vector<double> res;
  for (std::size_t points : {101u, 1001u}) {
    const auto tracks = flow_matrices(h1, h2, key, uniform_grid(points), opts);
    res.push_back(summarize(tracks, 1e-8).max_hf_residual);
  }
  const double slope = std::log10(res[0] / res[1]);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("flow endpoints reproduce solve_levels bit for bit") {
  const auto spec = fixed_spec(coulomb(), tangent(), {{0, 0}, {1, 0}, {0, 1}}, 25, 0.7, 11);
  const auto r = flow_levels(spec);
  for (const auto& t : r.tracks) {
    const auto& b = spec.basis_for(t.key.l);
    const auto e1 = ham::solve_levels(coulomb().kinetic, coulomb().potential, b, 2);
    const auto e2 = ham::solve_levels(tangent().kinetic, tangent().potential, b, 2);
    CHECK(t.energy.front() == e1[t.key.n].energy);
    CHECK(t.energy.back() == e2[t.key.n].energy);
  }
}

TEST_CASE("ordering report scenarios") {
  const auto pot = ordering_report(make_flow_spec(coulomb(), tangent(), {{0, 0}, {1, 0}, {0, 1}, {0, 2}}, 30, 41));
  CHECK(pot.psd_gap >= -1e-9);
  CHECK(pot.all_ordered());
  CHECK(pot.consistent());
  for (const auto& v : pot.levels) {
    CHECK(v.delta > 0.0);
    CHECK(v.delta == doctest::Approx(analytic::level_difference(1.0, 1.0, 1.0, v.key.n, v.key.l)).epsilon(0.05));
  }

  const Endpoint salp{ham::Salpeter{1.0}, ham::Coulomb{0.5}};
  const Endpoint rest{ham::NonRelTwoBody{1.0}, ham::Coulomb{0.5}};
  const auto kin = ordering_report(make_flow_spec(salp, rest, {{0, 0}, {1, 0}, {0, 1}}, 30, 41));
  CHECK(kin.psd_gap >= -1e-9);
  CHECK(kin.all_ordered());
  for (const auto& v : kin.levels) CHECK(v.e1 <= v.e2);

  // reversed pair: the gap is negative, so the report makes no claim
  const auto rev = ordering_report(make_flow_spec(rest, salp, {{0, 0}}, 30, 21));
  CHECK(rev.psd_gap < 0.0);
  CHECK_FALSE(rev.all_ordered());
  CHECK(rev.consistent());
}

TEST_CASE("pointwise ordering") {
  const auto same = [](double r) { return std::sin(r); };
  const auto grid = log_grid(1e-3, 50.0, 200);
  CHECK(pointwise_ordering(same, same, grid).min_difference == 0.0);

  const auto v1 = [](double r) { return -1.0 / r; };
  const auto v2 = [](double r) { return analytic::tangent_harmonic_potential(1.0, 1.0, r); };
  const auto pv = pointwise_ordering(v1, v2, grid);
  CHECK(pv.holds);
  CHECK(pv.min_difference >= 0.0);
  CHECK(pv.location == doctest::Approx(1.0).epsilon(0.05));

  std::vector<double> p(501);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.1 * static_cast<double>(i);
  const auto t1 = [](double q) { return 2.0 * std::sqrt(q * q + 1.0); };
  const auto t2 = [](double q) { return 2.0 + q * q; };
  const auto kv = pointwise_ordering(t1, t2, p);
  CHECK(kv.holds);
  CHECK(kv.min_difference == 0.0);
  CHECK(kv.location == 0.0);

  const auto reversed = pointwise_ordering(v2, v1, grid);
  CHECK_FALSE(reversed.holds);

  CHECK_THROWS_AS(pointwise_ordering(v1, v2, std::vector<double>{-1.0}), ValidationError);
  try {
    pointwise_ordering(v1, v2, std::vector<double>{1.0, 0.0});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("x=0") != std::string::npos);
  }
}

TEST_CASE("random positive perturbations order every eigenvalue") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = random_symmetric(30, rng);
    std::vector<double> p(5 * 30);
    for (auto& x : p) x = g(rng);
    auto h2 = h;
    h2 += gram(p, 5, 30);
    const auto c = compare_spectra(h, h2);
    CHECK(c.psd_gap >= -1e-9);
    CHECK(c.ordered);

    const std::vector<LevelKey> keys{{0, 0}, {14, 0}, {29, 0}};
    const auto tracks = flow_matrices(h, h2, keys, uniform_grid(11));
    CHECK(summarize(tracks, 1e-9).hf_nonnegative);
  }
}

TEST_CASE("serial and parallel flows are bit-identical") {
  const auto spec = fixed_spec(coulomb(), tangent(), {{0, 0}, {2, 0}}, 20, 0.7, 31);
  FlowOptions s, p;
  s.exec = Execution::serial;
  p.exec = Execution::parallel;
  const auto rs = flow_levels(spec, s);
  const auto rp = flow_levels(spec, p);
  for (std::size_t k = 0; k < rs.tracks.size(); ++k) {
    CHECK(rs.tracks[k].energy == rp.tracks[k].energy);
    CHECK(rs.tracks[k].hf_expectation == rp.tracks[k].hf_expectation);
    CHECK(rs.tracks[k].refined_derivative == rp.tracks[k].refined_derivative);
  }
}

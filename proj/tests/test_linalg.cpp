#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "specorder/oracle.hpp"
#include "specorder/errors.hpp"
#include "specorder/linalg.hpp"

using namespace specorder;
using linalg::SymMatrix;

namespace {

SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, u(rng));
  return a;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

SymMatrix product(const SymMatrix& a, const SymMatrix& b) {
  // only used on commuting pairs, where the product is symmetric
  const auto n = a.size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      out.set(i, j, s);
    }
  return out;
}

}  // namespace

TEST_CASE("eigh: identity and swap matrices") {
  const auto id = linalg::eigh(SymMatrix::identity(3));
  for (double e : id.eigenvalues) CHECK(e == doctest::Approx(1.0).epsilon(1e-15));

  const auto swap = linalg::eigh(SymMatrix::from_rows(2, {0, 1, 1, 0}));
  CHECK(swap.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(swap.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eigh: random 3x3 agrees with characteristic polynomial bisection") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_symmetric(3, rng);
    const auto roots = oracle::cubic_eigenvalues(a);
    const auto ev = linalg::eigh(a).eigenvalues;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - roots[k]) < 1e-9);
  }
}

TEST_CASE("eigh: decomposition invariants on random matrices") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    const auto a = random_symmetric(n, rng, 3.0);
    const auto eig = linalg::eigh(a);
    const double scale = a.max_abs();

    CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
    // orthonormality
    double ortho = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += eig.vector(i)[k] * eig.vector(j)[k];
        ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    CHECK(ortho <= 1e-10);
    // residual ‖Av − λv‖
    double resid = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * eig.vector(k)[j];
        resid = std::max(resid, std::abs(av - eig.eigenvalues[k] * eig.vector(k)[i]));
      }
    CHECK(resid <= 1e-9 * scale);
    // reconstruction and trace
    CHECK(max_abs_diff(eig.recompose(eig.eigenvalues), a) <= 1e-9 * scale);
    double sum = 0.0;
    for (double e : eig.eigenvalues) sum += e;
    CHECK(std::abs(sum - a.trace()) <= 1e-9 * scale * static_cast<double>(n));
  }
}

TEST_CASE("eigh: deterministic and eigvalsh is bit-identical") {
  std::mt19937_64 rng(99);
  const auto a = random_symmetric(30, rng);
  const auto e1 = linalg::eigh(a);
  const auto e2 = linalg::eigh(a);
  CHECK(e1.eigenvalues == e2.eigenvalues);
  CHECK(e1.vectors == e2.vectors);
  CHECK(linalg::eigvalsh(a) == e1.eigenvalues);
}

TEST_CASE("eigh: degenerate spectrum yields an orthonormal eigenbasis") {
  const auto a = SymMatrix::diagonal(std::vector<double>{2.0, 2.0, 2.0, 5.0});
  const auto eig = linalg::eigh(a);
  CHECK(eig.eigenvalues[0] == 2.0);
  CHECK(eig.eigenvalues[3] == 5.0);
  CHECK(max_abs_diff(eig.recompose(eig.eigenvalues), a) < 1e-14);
}

TEST_CASE("tridiagonal_eigenvalues matches dense eigvalsh") {
  const std::vector<double> d{1.0, -2.0, 0.5, 3.0};
  const std::vector<double> e{0.3, 1.1, -0.7};
  SymMatrix a(4);
  for (std::size_t i = 0; i < 4; ++i) a.set(i, i, d[i]);
  for (std::size_t i = 0; i < 3; ++i) a.set(i, i + 1, e[i]);
  const auto t = linalg::tridiagonal_eigenvalues(d, e);
  const auto full = linalg::eigvalsh(a);
  for (std::size_t k = 0; k < 4; ++k) CHECK(t[k] == doctest::Approx(full[k]).epsilon(1e-13));
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(SymMatrix::from_rows(2, {0, 1, 1.5, 0}), ValidationError);
  CHECK_THROWS_AS(SymMatrix::from_rows(2, {0, 1, 1}), ValidationError);
  CHECK_THROWS_AS(SymMatrix::from_rows(1, {std::nan("")}), ValidationError);
  // tiny asymmetry inside the 1e-12 relative window is accepted
  CHECK_NOTHROW(SymMatrix::from_rows(2, {0, 1.0, 1.0 + 1e-13, 0}));

  SymMatrix bad(2);
  bad.set(0, 1, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(linalg::eigh(bad), ValidationError);
}

TEST_CASE("apply_spectral_function: closed cases") {
  std::mt19937_64 rng(3);
  const auto a = random_symmetric(6, rng);
  CHECK(max_abs_diff(linalg::apply_spectral_function(a, [](double x) { return x; }), a) <= 1e-10);

  const auto d = SymMatrix::diagonal(std::vector<double>{4.0, 9.0});
  const auto s = linalg::apply_spectral_function(d, [](double x) { return std::sqrt(x); });
  CHECK(s(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s(1, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s(0, 1) == 0.0);

  CHECK_THROWS_AS(linalg::apply_spectral_function(SymMatrix::diagonal(std::vector<double>{-1.0, 1.0}),
                                                  [](double x) { return std::log(x); }),
                  NumericError);
}

TEST_CASE("apply_spectral_function: 2*sqrt(x+1) on a p^2 block matches a Taylor series") {
  // 4×4 p² matrix of the l=0 oscillator basis with b=2.
  SymMatrix p2(4);
  for (std::size_t n = 0; n < 4; ++n) {
    const double nd = static_cast<double>(n);
    p2.set(n, n, (2.0 * nd + 1.5) / 4.0);
    if (n > 0) p2.set(n - 1, n, std::sqrt(nd * (nd - 0.5 + 1.0)) / 4.0);
  }
  const auto via_eig = linalg::apply_spectral_function(p2, [](double x) { return 2.0 * std::sqrt(x + 1.0); });
  const auto series = oracle::sqrt_shift_series(p2, 1.0, 2.0);
  CHECK(max_abs_diff(via_eig, series.value) <= 1e-10 + series.remainder_bound);
  CHECK(series.remainder_bound < 1e-12);
}

TEST_CASE("apply_spectral_function: spectral mapping, commutation, monotone order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_symmetric(12, rng, 2.0);
    const auto f = [](double x) { return std::exp(0.5 * x) + x * x * x; };  // increasing
    const auto fa = linalg::apply_spectral_function(a, f);

    auto mapped = linalg::eigvalsh(a);
    for (double& v : mapped) v = f(v);
    const auto got = linalg::eigvalsh(fa);
    CHECK(std::is_sorted(mapped.begin(), mapped.end()));
    for (std::size_t k = 0; k < mapped.size(); ++k)
      CHECK(std::abs(got[k] - mapped[k]) <= 1e-9 * (1.0 + std::abs(mapped[k])));

    SymMatrix afa(a.size()), faa(a.size());
    const auto n = a.size();
    double comm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double x = 0.0, y = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          x += a(i, k) * fa(k, j);
          y += fa(i, k) * a(k, j);
        }
        comm = std::max(comm, std::abs(x - y));
      }
    CHECK(comm <= 1e-9 * a.max_abs() * fa.max_abs());
    (void)afa;
    (void)faa;
  }
}

TEST_CASE("apply_spectral_function: square of sqrt recovers a PSD matrix") {
  std::mt19937_64 rng(5);
  auto m = random_symmetric(8, rng);
  const auto psd = product(m, m);  // m² is symmetric and PSD
  const auto root = linalg::apply_spectral_function(psd, [](double x) { return std::sqrt(std::max(x, 0.0)); });
  CHECK(max_abs_diff(product(root, root), psd) <= 1e-10);
}

TEST_CASE("min_eigenvalue") {
  CHECK(linalg::min_eigenvalue(SymMatrix(3)) == 0.0);
  CHECK(linalg::min_eigenvalue(SymMatrix::diagonal(std::vector<double>{-2.0, 5.0})) == -2.0);
  CHECK_THROWS_AS(linalg::min_eigenvalue(SymMatrix()), ValidationError);
}

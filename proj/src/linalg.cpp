#include "specorder/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "specorder/errors.hpp"
#include "specorder/parallel.hpp"

namespace specorder::linalg {

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.data_[i * d.size() + i] = d[i];
  return m;
}

SymMatrix SymMatrix::from_rows(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) {
    std::ostringstream msg;
    msg << "SymMatrix: expected " << n * n << " entries, got " << values.size();
    throw ValidationError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = values[i * n + j];
      if (!std::isfinite(aij)) {
        std::ostringstream msg;
        msg << "SymMatrix: non-finite entry at (" << i << "," << j << ")";
        throw ValidationError(msg.str());
      }
      if (j > i && std::abs(aij - values[j * n + i]) > 1e-12 * std::max(1.0, std::abs(aij))) {
        std::ostringstream msg;
        msg << "SymMatrix: not symmetric at (" << i << "," << j << "): " << aij << " vs " << values[j * n + i];
        throw ValidationError(msg.str());
      }
    }
  }
  SymMatrix m;
  m.n_ = n;
  m.data_ = std::move(values);
  // Store the exact mirror so downstream kernels see a symmetric array.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.data_[j * n + i] = m.data_[i * n + j];
  return m;
}

void SymMatrix::add_to_diagonal(double shift) noexcept {
  for (std::size_t i = 0; i < n_; ++i) data_[i * n_ + i] += shift;
}

double SymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
  return t;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.n_ != n_) throw ValidationError("SymMatrix: dimension mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.n_ != n_) throw ValidationError("SymMatrix: dimension mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

namespace {

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On return d holds the diagonal and e[1..n-1] the sub-diagonal. With
// accumulate, v holds the orthogonal transformation (row-major, columns are
// basis vectors); otherwise v is scratch.
void tridiagonalize(std::vector<double>& v, std::size_t n, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate) {
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) with e[i] coupling i-1 and i.
// If z is non-empty it holds n row vectors that receive the rotations.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, std::size_t n) {
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const bool vectors = !z.empty();
  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_ql_iterations) {
          std::ostringstream msg;
          msg << "eigh: no convergence for " << n << "x" << n << " matrix after " << max_ql_iterations
              << " QL sweeps on eigenvalue " << l;
          throw NumericError(msg.str());
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (vectors) {
            double* zi = z.data() + ii * n;
            double* zj = zi + n;
            for (std::size_t k = 0; k < n; ++k) {
              const double t = zj[k];
              zj[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void require_finite(const SymMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!std::isfinite(a(i, j))) {
        std::ostringstream msg;
        msg << "eigh: non-finite entry at (" << i << "," << j << ") of " << a.size() << "x" << a.size()
            << " matrix";
        throw ValidationError(msg.str());
      }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return idx;
}

}  // namespace

SpectralDecomposition eigh(const SymMatrix& a) {
  require_finite(a);
  const std::size_t n = a.size();
  SpectralDecomposition out;
  if (n == 0) return out;

  std::vector<double> v(a.data().begin(), a.data().end());
  std::vector<double> d(n), e(n);
  tridiagonalize(v, n, d, e, true);

  // QL rotates columns of v; work on the transpose so each rotation touches
  // two contiguous rows.
  std::vector<double> z(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) z[i * n + k] = v[k * n + i];
  tridiagonal_ql(d, e, z, n);

  const auto order = ascending_order(d);
  out.eigenvalues.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = d[order[k]];
    std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  return out;
}

std::vector<double> eigvalsh(const SymMatrix& a) {
  require_finite(a);
  const std::size_t n = a.size();
  if (n == 0) return {};
  std::vector<double> v(a.data().begin(), a.data().end());
  std::vector<double> d(n), e(n);
  tridiagonalize(v, n, d, e, false);
  std::vector<double> none;
  tridiagonal_ql(d, e, none, n);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (offdiag.size() + 1 != n) throw ValidationError("tridiagonal_eigenvalues: off-diagonal length must be n-1");
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = offdiag[i - 1];
  std::vector<double> none;
  tridiagonal_ql(diag, e, none, n);
  std::sort(diag.begin(), diag.end());
  return diag;
}

SymMatrix SpectralDecomposition::recompose(std::span<const double> values) const {
  const std::size_t n = size();
  // samples(i,k) = k-th eigenvector component i
  std::vector<double> samples(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) samples[i * n + k] = vectors[k * n + i];
  return kernels::weighted_gram(samples, n, n, values);
}

SymMatrix apply_spectral_function(const SpectralDecomposition& eig, const ScalarFunction& f) {
  std::vector<double> fv(eig.size());
  for (std::size_t k = 0; k < eig.size(); ++k) {
    fv[k] = f(eig.eigenvalues[k]);
    if (!std::isfinite(fv[k])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "apply_spectral_function: f is not finite at eigenvalue " << eig.eigenvalues[k] << " (index " << k
          << ")";
      throw NumericError(msg.str());
    }
  }
  return eig.recompose(fv);
}

SymMatrix apply_spectral_function(const SymMatrix& a, const ScalarFunction& f) {
  return apply_spectral_function(eigh(a), f);
}

double min_eigenvalue(const SymMatrix& a) {
  if (a.size() == 0) throw ValidationError("min_eigenvalue: empty matrix");
  return eigvalsh(a).front();
}

double quadratic_form(const SymMatrix& a, std::span<const double> x) {
  const std::size_t n = a.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = a.row(i);
    double ri = 0.0;
    for (std::size_t j = 0; j < n; ++j) ri += r[j] * x[j];
    acc += x[i] * ri;
  }
  return acc;
}

}  // namespace specorder::linalg

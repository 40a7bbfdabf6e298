#pragma once

// Dense real-symmetric linear algebra: storage, eigendecomposition
// (Householder tridiagonalization + implicit QL) and spectral function
// calculus f(A) = U f(Λ) Uᵀ.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace specorder::linalg {

/// Dense symmetric matrix, row-major n×n storage.
///
/// Writes through set() keep both triangles in sync. Matrices built from
/// external data go through from_rows(), which enforces symmetry and
/// finiteness.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  /// Validating constructor. Throws ValidationError on asymmetry beyond
  /// 1e-12·max(1,|a_ij|) or on non-finite entries.
  static SymMatrix from_rows(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  void add_to_diagonal(double shift) noexcept;

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * n_, n_);
  }

  double max_abs() const noexcept;
  double trace() const noexcept;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s) noexcept;

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Eigensystem of a SymMatrix: eigenvalues ascending, eigenvector k stored
/// contiguously (vector(k)), orthonormal.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> vectors;  // n×n, row k = eigenvector k

  std::size_t size() const noexcept { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t k) const noexcept {
    const auto n = size();
    return std::span<const double>(vectors).subspan(k * n, n);
  }
  /// U·diag(values)·Uᵀ for this eigenbasis.
  SymMatrix recompose(std::span<const double> values) const;
};

using ScalarFunction = std::function<double(double)>;

/// Full eigendecomposition. Throws NumericError if an eigenvalue needs more
/// than max_ql_iterations implicit QL sweeps.
SpectralDecomposition eigh(const SymMatrix& a);

/// Eigenvalues only (ascending). The arithmetic on eigenvalues is the same
/// as in eigh(), so both return bit-identical eigenvalues.
std::vector<double> eigvalsh(const SymMatrix& a);

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal (offdiag[i] couples i and i+1), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::span<const double> offdiag);

/// f(A) = U f(Λ) Uᵀ. Throws NumericError naming the eigenvalue where f is
/// not finite.
SymMatrix apply_spectral_function(const SymMatrix& a, const ScalarFunction& f);
SymMatrix apply_spectral_function(const SpectralDecomposition& eig, const ScalarFunction& f);

double min_eigenvalue(const SymMatrix& a);

/// xᵀ A x.
double quadratic_form(const SymMatrix& a, std::span<const double> x);

inline constexpr int max_ql_iterations = 50;

}  // namespace specorder::linalg

#include "specorder/parallel.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specorder {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {
namespace {

inline double gram_entry(const double* si, const double* sj, const double* w, std::size_t cols) {
  double acc = 0.0;
  for (std::size_t k = 0; k < cols; ++k) acc += si[k] * w[k] * sj[k];
  return acc;
}

void gram_row(linalg::SymMatrix& out, const double* s, const double* w, std::size_t i, std::size_t rows,
              std::size_t cols) {
  const double* si = s + i * cols;
  for (std::size_t j = i; j < rows; ++j) out.set(i, j, gram_entry(si, s + j * cols, w, cols));
}

}  // namespace

linalg::SymMatrix weighted_gram(std::span<const double> samples, std::size_t rows, std::size_t cols,
                                std::span<const double> weights, Execution exec) {
  assert(samples.size() == rows * cols);
  assert(weights.size() == cols);
  linalg::SymMatrix out(rows);
  const double* s = samples.data();
  const double* w = weights.data();

  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < rows; ++i) gram_row(out, s, w, i, rows, cols);
    return out;
  }

  // Rows write disjoint upper-triangle entries (and their mirrors).
  const auto n = static_cast<long long>(rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i) gram_row(out, s, w, static_cast<std::size_t>(i), rows, cols);
  return out;
}

}  // namespace kernels
}  // namespace specorder

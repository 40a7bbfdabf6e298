#pragma once

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; the OpenMP path assigns each output element to exactly one
// thread and keeps the per-element summation order, so both paths return
// bit-identical results.

#include <cstddef>
#include <span>

#include "specorder/linalg.hpp"

namespace specorder {

enum class Execution { serial, parallel };

/// Number of OpenMP threads the parallel paths will use (1 without OpenMP).
int max_threads() noexcept;

namespace kernels {

/// out(i,j) = Σ_k s(i,k)·w_k·s(j,k) for a row-major rows×cols sample matrix s.
linalg::SymMatrix weighted_gram(std::span<const double> samples, std::size_t rows, std::size_t cols,
                                std::span<const double> weights, Execution exec = Execution::parallel);

}  // namespace kernels
}  // namespace specorder

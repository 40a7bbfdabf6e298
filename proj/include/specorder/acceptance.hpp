#pragma once

// The built-in verification suite: nine end-to-end checks of the solver
// against closed-form spectra, the comparison theorem and the
// Hellmann–Feynman identity. Shared by `specorder verify` and the
// acceptance test binary.

#include <functional>
#include <string>
#include <vector>

namespace specorder::acceptance {

struct Result {
  int id = 0;
  std::string name;
  std::string quantity;    // what `measured` is
  double measured = 0.0;   // worst observed value of `quantity`
  double tolerance = 0.0;  // bound on `measured`
  bool passed = false;     // every sub-check and the time limit
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string note;        // secondary measurements or the failure reason
};

struct Criterion {
  int id = 0;
  std::string name;
  double time_limit = 0.0;  // seconds
  std::function<Result()> body;
};

const std::vector<Criterion>& criteria();

/// Runs one criterion, times it and turns exceptions into a failed result.
Result run(const Criterion& c);

std::vector<Result> run_all();

}  // namespace specorder::acceptance

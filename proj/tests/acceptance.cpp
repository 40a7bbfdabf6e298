// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <cstdio>

#include "specorder/acceptance.hpp"

int main() {
  using namespace specorder::acceptance;
  bool all = true;
  for (const auto& c : criteria()) {
    const auto r = run(c);
    all = all && r.passed;
    std::printf("%s criterion %d (%s): %s = %.6g, tolerance %.6g, %.2fs of %.0fs%s%s\n", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.quantity.c_str(), r.measured, r.tolerance, r.seconds, r.time_limit,
                r.note.empty() ? "" : "; ", r.note.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

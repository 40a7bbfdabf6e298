#pragma once

#include <iosfwd>
#include <string_view>

namespace specorder::cli {

inline constexpr int kSuccess = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kNumericFailure = 3;

std::string_view version() noexcept;

/// Entry point of the `specorder` tool. Table output goes to `out` unless
/// redirected with --out; diagnostics and CSV summaries go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specorder::cli

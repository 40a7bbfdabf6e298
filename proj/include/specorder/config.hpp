#pragma once

// Run configuration for the command-line tool.
//
// The file format is flat `key = value` text. Keys are dotted paths such as
// `problem1.kinetic.kind`, `#` starts a comment, and blank lines are ignored.
// Every key must be understood by the command being run; anything else is
// rejected with the line it came from.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specorder/errors.hpp"
#include "specorder/hamiltonian.hpp"

namespace specorder::config {

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct Entry {
  std::string value;
  int line = 0;
};

struct RawConfig {
  std::string source;  // file name used in messages
  std::map<std::string, Entry> entries;
};

/// Splits text into entries. Rejects malformed lines and repeated keys.
RawConfig parse(std::string_view text, std::string source = "<config>");
RawConfig read_file(const std::string& path);

enum class Command { solve, compare, flow };

struct Problem {
  ham::KineticSpec kinetic = ham::NonRel{1.0};
  ham::PotentialSpec potential = ham::Coulomb{1.0};
};

struct RunConfig {
  Command command = Command::solve;
  std::vector<Problem> problems;  // one for solve, two otherwise
  std::vector<int> l_values{0};
  std::size_t level_count = 1;
  std::size_t basis_size = 40;
  std::optional<double> b;  // unset: optimise per level
  std::size_t grid = 101;
  int richardson = 3;
  std::string format = "csv";
  std::string out_path = "-";  // "-" is standard output
  double tolerance = 1e-8;
  /// Effective key/value pairs, echoed into JSON output.
  std::map<std::string, std::string> echo;
};

/// Interprets the entries for one command. Throws ConfigError naming the
/// line and field for every problem it finds first.
RunConfig interpret(const RawConfig& raw, Command command);

}  // namespace specorder::config

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gaussent/io.hpp"

namespace gaussent::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kBudget = 3,
};

/// Settings shared by every subcommand; recorded in the output metadata.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;
  std::string output_path;  // empty: write to the output stream
  io::Format format = io::Format::JsonLines;
};

/// Runs the command line `args` (without the program name). Records go to
/// `out` unless --out is given; diagnostics go to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaussent::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fatou/cli/config.hpp"

namespace fatou::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitViolation = 4,
  kExitIo = 5,
};

/// Decimal rendering with 17 significant digits ("%.17g"); round-trips doubles.
std::string format_real(double x);

/// Writes to `path` + ".tmp" and renames over the target. Throws IoError.
void write_file_atomically(const std::string& path, const std::string& bytes);

// Each command writes its primary artifact to config.output (or `out` when no
// path is set) and returns an exit code. Library exceptions propagate; run()
// maps them onto exit codes.
int cmd_preimages(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_shadow(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_render(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: `<command> --config <path> [--out <path>]`.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fatou::cli

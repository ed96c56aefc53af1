#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdde/core.hpp"
#include "fdde/solver.hpp"

namespace fdde::cli {

enum class Command { Simulate, Equilibria, Classify, CritDelay, Region, Bifurcation, Lyapunov };
enum class Format { Csv, Json };

/// Exit codes of `run` and of the fdde binary.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kValidation = 3;
inline constexpr int kNumerical = 4;
inline constexpr int kDiverged = 5;
}  // namespace exit_code

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct RunConfig {
  Command command = Command::Simulate;
  ModelParams params;
  SolverConfig solver;
  std::optional<double> history_const;
  std::optional<double> a;  ///< crit-delay direct mode
  std::optional<double> b;
  std::optional<Range> tau_range;  ///< bifurcation / lyapunov sweeps
  std::size_t tau_steps = 0;
  Range q_range;
  Range delta_range;
  std::size_t grid_q = 0;
  std::size_t grid_delta = 0;
  double transient = 0.5;
  std::string out_path;  ///< empty writes to stdout
  Format format = Format::Csv;
  std::optional<std::string> help;  ///< set when --help was requested
};

/// Parses `fdde <command> [flags]`. A `--config FILE` of `key=value` lines
/// (`#` comments) may supply any flag; explicit flags win.
/// Throws UsageError (missing or malformed flags) or ValidationError
/// (well-formed but out-of-range values).
RunConfig parse_args(int argc, const char* const* argv);
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes the command, writes the output file (or `out`), and reports any
/// error as one JSON line on `err`. Returns one of the exit_code values.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Formats a real with 17 significant digits.
std::string format_number(double v);

/// Single-line JSON diagnostic {"error": kind, "message": text}.
std::string diagnostic(const std::string& kind, const std::string& message);

}  // namespace fdde::cli

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccnbif {

inline constexpr const char* kVersion = "1.0.0";

enum class Command { Analyze, Verify, Continue };
enum class Format { Text, Records };

struct RunConfig {
  Command command = Command::Analyze;
  std::string input;                       // network or generator file
  std::optional<std::string> generators;   // symmetry override for a network input
  std::optional<std::string> field;        // required by continue
  std::uint64_t seed = 0;
  int trials = 1000;
  std::optional<std::pair<double, double>> window;
  std::optional<double> rank_tol;
  std::optional<std::string> out;
  Format format = Format::Text;
  bool check_replay = false;
};

/// Two runs with identical configuration produced different reports.
class ReplayMismatch : public std::runtime_error {
 public:
  ReplayMismatch() : std::runtime_error("repeated run produced a different report") {}
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;       // usage, parse and model errors
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitReplay = 3;
inline constexpr int kExitNoBifurcation = 4;

/// Builds the full report document for a configuration. Throws the library
/// exceptions unchanged.
std::string execute(const RunConfig& cfg);

/// Parses arguments, runs, writes the report to `out` (or the --out file) and
/// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccnbif

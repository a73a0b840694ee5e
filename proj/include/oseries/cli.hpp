#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

namespace oseries::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kAssertionFailure = 3 };

// Thrown for inputs that parse but exceed a resource budget or violate a precondition.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Well-formed command line naming something that does not exist.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalyzeConfig {
  std::string input;
  std::string indicator = "info2";  // info2 | closed
  bool exact = false;
};
struct ConstructConfig {
  std::optional<unsigned> k;
  std::optional<std::string> b;  // grid0 | grid1 | grid2 | "p/q,..." | path to a JSON list
  std::optional<double> target;
  bool with_process = false;
  bool exact = false;
};
struct VerifyConfig {
  std::vector<std::string> suites;  // empty: all
  std::uint64_t seed = 0;
  size_t count = 100;
  bool corrupt = false;
  unsigned jobs = 1;
};
struct CantorConfig {
  std::string set = "cantor";  // "cantor" or path to a closed-set JSON
  std::string t = "0";
  std::vector<std::string> widths{"1/3", "1/9", "1/27"};
  unsigned depth = 10;
  unsigned k_max = 12;
};
struct MeasureConfig {
  std::string probs;  // "p/q,..." or path
};

// Each command returns the JSON report; the exit code goes into `code`.
nlohmann::json cmd_analyze(const AnalyzeConfig& c, int& code);
nlohmann::json cmd_construct(const ConstructConfig& c, int& code);
nlohmann::json cmd_verify(const VerifyConfig& c, int& code);
nlohmann::json cmd_cantor(const CantorConfig& c, int& code);
nlohmann::json cmd_measure(const MeasureConfig& c, int& code);

// Human-readable summary of a report.
std::string render_table(const nlohmann::json& report);

// ORTHO_EXACT=1 in the environment.
bool exact_from_env();

// Full front end: parses argv, runs the command, writes the report.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace oseries::cli

// The acceptance suite: seven quantitative gates shared by `dpnls verify` and the test binary.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dpnls {

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation = "<";  // or "<="
  double seconds = 0.0;
  double time_limit = 0.0;
  bool value_ok = false;
  bool time_ok = false;
  bool pass = false;
  std::string detail;  // extra measurements, or the error message of a failed run
};

struct AcceptanceOptions {
  std::filesystem::path fixtures;  // directory holding the suite's input files
  bool progress = false;           // print a line before each criterion
};

/// Default fixture directory (compiled in).
std::filesystem::path default_fixture_dir();

/// Files each criterion reads; verify checks they exist before running anything.
std::vector<std::filesystem::path> required_fixtures(int id);

/// Runs one criterion. Missing fixtures throw InputError; a malformed fixture or a numerical
/// failure is reported as a failed result naming the criterion.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// One line per criterion: "[PASS] 1 double-pole exactness: measured 2.3e-08 < 1e-06 (12.1 s / 30 s)".
std::string format_result(const CriterionResult& r);

/// Machine-readable report: {"criteria": [{id, name, measured, threshold, relation, seconds,
/// time_limit, pass, detail}], "all_pass": bool}.
std::string report_json(const std::vector<CriterionResult>& results);

}  // namespace dpnls

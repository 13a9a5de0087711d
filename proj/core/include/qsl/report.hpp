#pragma once

// Report emission from a results directory written by run_suite.

#include <filesystem>
#include <string>
#include <vector>

#include "qsl/experiments.hpp"

namespace qsl {

// Reads verdicts.csv. Throws MissingInputs if it is absent or has no rows.
std::vector<Verdict> read_verdicts(const std::filesystem::path& dir);

struct CriterionStatus {
  int criterion = 0;
  std::string name;
  int claims = 0;
  std::vector<std::string> failed;  // "experiment/claim"
  bool pass() const { return claims > 0 && failed.empty(); }
};

// One entry per acceptance criterion 1..12; a criterion with no verdicts fails.
std::vector<CriterionStatus> criterion_status(const std::vector<Verdict>& verdicts);

// "PASS criterion 3: <name> (n claims)" or FAIL with the failed claims.
std::string format_criterion(const CriterionStatus& s);

struct Report {
  std::vector<Verdict> verdicts;
  std::vector<CriterionStatus> criteria;
  std::string text;
  bool all_pass() const;
};

// Writes report.txt (per-experiment claim tables and one line per criterion)
// and criteria.csv into `dir`. Plot data stays in dir/plots.
Report emit_report(const std::filesystem::path& dir);

}  // namespace qsl

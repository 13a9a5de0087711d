#pragma once

// Experiment registry and suite runner. Every experiment declares the claims
// it tests; each claim maps to one acceptance criterion and produces one or
// more verdict rows.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsl/config.hpp"
#include "qsl/dynamics.hpp"

namespace qsl {

class ThreadPool;

struct Claim {
  std::string id;
  int criterion = 0;
  std::string statement;
};

struct Verdict {
  std::string experiment;
  std::string claim;
  int criterion = 0;
  std::string metric;
  std::string comparator;  // ">=", "<=", "in", "=="
  double threshold = 0.0;
  double threshold_hi = 0.0;  // upper end for "in"
  double measured = 0.0;
  bool pass = false;
  std::string note;
};

// Rows are stored already formatted so that output is byte-stable.
struct Table {
  std::string name;  // file stem; tables with the same name are concatenated
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

std::string format_number(double v);
std::string format_bool(bool b);

struct PlotSeries {
  std::string name;
  std::string x_label, y_label;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  std::vector<PlotSeries> plots;
  std::vector<std::string> log;  // free-form lines for the summary

  bool passed() const;
  Verdict& add_verdict(const Claim& claim, std::string metric, std::string comparator, double threshold,
                       double measured, std::string note = {});
  Verdict& add_range_verdict(const Claim& claim, std::string metric, double lo, double hi, double measured,
                             std::string note = {});
  Verdict& add_check(const Claim& claim, std::string metric, bool ok, std::string note = {});
};

struct RunContext {
  const ExperimentConfig& config;
  ThreadPool* pool = nullptr;
  // Constants from an earlier calibration in the same suite, if any.
  std::optional<QuantizationConstants> constants;
};

using ExperimentFn = std::function<ExperimentResult(const RunContext&)>;

struct ExperimentInfo {
  std::string id;
  std::string description;
  std::vector<Claim> claims;
  ExperimentFn run;

  const Claim& claim(const std::string& claim_id) const;
};

const std::vector<ExperimentInfo>& experiment_registry();
// Throws UnknownExperiment.
const ExperimentInfo& find_experiment(const std::string& id);

// Short names of the acceptance criteria, index 1..12.
const std::vector<std::string>& criterion_names();

struct SuiteOutcome {
  std::vector<ExperimentResult> results;
  bool all_pass = true;
  std::vector<std::string> failed;  // "experiment/claim: metric"
};

// Runs every configured experiment in file order and writes the artifacts
// into suite.output_dir. `heavy` forces heavy mode on every experiment.
SuiteOutcome run_suite(const SuiteConfig& suite, bool heavy = false);

// CSV tables, verdicts.csv, plots/<name>.csv and summary.txt.
void write_results(const std::filesystem::path& dir, const std::vector<ExperimentResult>& results);

}  // namespace qsl

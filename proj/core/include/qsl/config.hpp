#pragma once

// Suite configuration: line-oriented `key = value` text with `[section]`
// headers. Top-level keys are defaults; each section names one experiment
// and may override them.
//
//   schema = 1
//   seed = 7
//   k = 64, 128, 256, 512
//   output = results
//
//   [cap-dislocation]
//   tolerance.slope = 4
//   state = cap(1, 0, 0, 0.3, 1.54)

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/phase_space.hpp"

namespace qsl {

struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;  // in file order
  int line = 0;
};

struct IniDocument {
  IniSection top;
  std::vector<IniSection> sections;
};

IniDocument parse_ini(std::string_view text);

struct ExperimentConfig {
  std::string id;
  std::vector<int> ks;
  std::optional<std::uint64_t> seed;
  double oversample = 1.5;
  int steps = 128;
  bool heavy = false;
  std::string s_rule;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> selections;
  std::filesystem::path output_dir;

  // Throws ConfigValidation.
  void validate() const;

  double tolerance(const std::string& name, double fallback) const;
  std::string selection(const std::string& name, const std::string& fallback) const;
  std::vector<double> selection_list(const std::string& name, const std::vector<double>& fallback) const;
};

struct SuiteConfig {
  std::vector<ExperimentConfig> experiments;
  std::filesystem::path output_dir = "results";
  int threads = 0;  // 0: QSL_THREADS or hardware concurrency
};

SuiteConfig parse_suite(std::string_view text, const std::filesystem::path& base_dir = {});
SuiteConfig load_suite(const std::filesystem::path& path);

std::vector<double> parse_number_list(std::string_view text);

// "power:e" (s = hbar^e), "sqrt:r" (s = r sqrt(hbar)), "fixed:s".
std::function<double(double)> parse_s_rule(const std::string& text);

// Observables by name, e.g. "x3", "rotation(0,0,1,3.14159)", "cap(1,0,0,0.3,1.54)",
// "chart-rotation(3.14159,0.9,0.98)", "chart-bump(0.45,0,0.02,0.08)",
// "chart-translation(0.86,0.97)". Chart-based forms use `chart`.
Observable parse_observable(const std::string& text, const EquatorialChart& chart = EquatorialChart(0.0, 0.99));

}  // namespace qsl

#pragma once

// Shared pieces of the experiment implementations.

#include <limits>
#include <string>
#include <vector>

#include "qsl/experiments.hpp"
#include "qsl/fit.hpp"

namespace qsl::detail {

ExperimentResult run_quantization_axioms(const RunContext& ctx);
ExperimentResult run_speed_limit(const RunContext& ctx);
ExperimentResult run_cap_dislocation(const RunContext& ctx);
ExperimentResult run_gamma_comparison(const RunContext& ctx);
ExperimentResult run_grid_superposition(const RunContext& ctx);
ExperimentResult run_rescaled(const RunContext& ctx);
ExperimentResult run_lagrangian(const RunContext& ctx);

inline constexpr double kSlack = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

const Claim& claim(const std::string& experiment, const std::string& id);

// Slope verdict: slope in [lo, hi] and r2 >= 0.98.
Verdict& add_fit_verdict(ExperimentResult& r, const Claim& c, const std::string& metric, const DecayFit& fit,
                         double lo, double hi = kInf);

std::vector<int> int_list(const ExperimentConfig& cfg, const std::string& key, const std::vector<int>& fallback);

// Shared CSV layouts.
Table dislocation_table();
Table sweep_table();
Table microprobe_table();

struct DislocationRow {
  std::string experiment;
  int k = 0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double ell_q = 0.0, ell_cl = 0.0, gamma_q = 0.0;
  double gamma_cl = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  double c = std::numeric_limits<double>::quiet_NaN();
  double slack_qsl = std::numeric_limits<double>::quiet_NaN();
  double slack_lo = std::numeric_limits<double>::quiet_NaN();
  double slack_hi = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
};
void add_row(Table& t, const DislocationRow& row);

struct SweepRow {
  std::string experiment;
  int k = 0;
  double s = std::numeric_limits<double>::quiet_NaN();
  double overlap = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double ell_q = std::numeric_limits<double>::quiet_NaN();
  int displaced = -1;  // -1 when not checked
  std::string window;
};
void add_row(Table& t, const SweepRow& row);

}  // namespace qsl::detail

#include <algorithm>
#include <cmath>

#include "experiments_impl.hpp"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/smallscale.hpp"

namespace qsl::detail {

namespace {

const char* kId = "rescaled";

}  // namespace

ExperimentResult run_rescaled(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };

  const EquatorialChart chart(0.0, cfg.tolerance("chart_radius", 0.99));
  RescaledExperiment ex;
  ex.ks = cfg.ks;
  ex.chart = chart;
  ex.hamiltonian = parse_observable(cfg.selection("hamiltonian", "chart-rotation(pi, 0.9, 0.98)"), chart);
  ex.density = parse_observable(cfg.selection("state", "chart-bump(0.45, 0, 0.02, 0.08)"), chart);
  ex.level = cfg.tolerance("level", 0.5);
  ex.steps = cfg.steps;
  ex.oversample = cfg.oversample;
  const double fmax = uniform_norm(ex.hamiltonian);
  const double regime = cfg.tolerance("regime", 0.1);

  Table sweep = sweep_table();
  double worst_qsl = kInf;
  int regime_rows = 0, regime_displaced = 0;
  auto record = [&](const RescaledResult& res, const std::string& window) {
    for (const auto& row : res.rows) {
      SweepRow s;
      s.experiment = kId;
      s.k = row.k;
      s.s = row.s;
      s.fidelity = row.fidelity;
      s.ell_q = row.ell_q;
      s.displaced = row.displaced ? 1 : 0;
      s.window = window;
      add_row(sweep, s);
      worst_qsl = std::min(worst_qsl, row.ell_q - std::acos(std::clamp(row.fidelity, 0.0, 1.0)) * row.hbar);
      if (row.fidelity <= regime) {
        ++regime_rows;
        if (row.displaced) ++regime_displaced;
      }
    }
  };

  // s = hbar^e: fidelity decays in hbar.
  {
    const std::string rule = cfg.selection("power_rule", "power:0.25");
    ex.s_rule = parse_s_rule(rule);
    const RescaledResult res = rescaled_experiment(ex, 2.0);
    record(res, rule);
    add_fit_verdict(r, c("rescaled-power"), "fidelity slope in hbar", res.fit_hbar, cfg.tolerance("power_slope", 2.0));
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : res.rows) pts.emplace_back(row.hbar, row.fidelity);
    r.plots.push_back({"power_fidelity", "hbar", "fidelity", pts});
  }

  // s = r sqrt(hbar): fidelity stays bounded away from 1 at energy s^2 max|f|.
  {
    const std::string rule = cfg.selection("sqrt_rule", "sqrt:6");
    ex.s_rule = parse_s_rule(rule);
    const RescaledResult res = rescaled_experiment(ex, 0.0);
    record(res, rule);
    const RescaledRow& last = res.rows.back();
    double worst_energy = kInf;
    for (const auto& row : res.rows) worst_energy = std::min(worst_energy, row.energy_cap - row.ell_q);
    r.add_verdict(c("rescaled-sqrt"), "fidelity at the largest k", "<=", cfg.tolerance("sqrt_fidelity", 0.9),
                  last.fidelity, "k=" + std::to_string(last.k) + ", min s^2 max|f| - ell_q = " +
                                     format_number(worst_energy) + ", max|f| = " + format_number(fmax));
    if (worst_energy < -kSlack) r.verdicts.back().pass = false;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : res.rows) pts.emplace_back(row.hbar, row.fidelity);
    r.plots.push_back({"sqrt_fidelity", "hbar", "fidelity", pts});
  }

  r.add_check(c("rescaled-displacement"), "rescaled superlevel set displaced on rows with fidelity <= regime",
              regime_rows > 0 && regime_displaced == regime_rows,
              std::to_string(regime_displaced) + " of " + std::to_string(regime_rows) + " rows");
  r.add_verdict(c("speed-limit-physical"), "min ell_q - arccos(a) hbar", ">=", -kSlack, worst_qsl);
  r.tables.push_back(std::move(sweep));
  return r;
}

}  // namespace qsl::detail

#include <algorithm>
#include <cmath>

#include "experiments_impl.hpp"
#include "qsl/calibrate.hpp"
#include "qsl/error.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl::detail {

namespace {

const char* kId = "gamma-comparison";

}  // namespace

ExperimentResult run_gamma_comparison(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  require(ctx.constants.has_value(), ErrorKind::CalibrationIndeterminate, std::string(kId) + " needs constants");
  const QuantizationConstants& K = *ctx.constants;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };

  const std::vector<GammaPair> battery = theorem_battery();
  ConstantsOptions copts;
  copts.check_resolution = true;
  std::vector<SemiclassicalConstants> consts;
  std::string unstable;
  for (const auto& p : battery) {
    consts.push_back(semiclassical_constants(p.g, p.f, K, copts));
    if (consts.back().resolution_warning) unstable += (unstable.empty() ? "" : " ") + p.name;
  }

  // One cell per (pair, k); rows outside b hbar < 1 are recorded but not compared.
  struct Cell {
    std::size_t pair = 0;
    int k = 0;
    bool in_hypothesis = false;
    GammaComparison cmp;
  };
  std::vector<std::pair<std::size_t, int>> jobs;
  for (std::size_t i = 0; i < battery.size(); ++i)
    for (int k : cfg.ks) jobs.emplace_back(i, k);
  auto run = [&](std::size_t j) {
    Cell cell;
    cell.pair = jobs[j].first;
    cell.k = jobs[j].second;
    const auto& p = battery[cell.pair];
    cell.in_hypothesis = consts[cell.pair].b / cell.k < 1.0;
    if (cell.in_hypothesis) {
      const auto space = QuantumSpace::build(cell.k, cfg.oversample);
      cell.cmp = gamma_comparison(space, p.g, p.f, cfg.steps, K, consts[cell.pair]);
    }
    return cell;
  };
  std::vector<Cell> cells;
  if (ctx.pool)
    cells = ctx.pool->map(jobs.size(), run);
  else
    for (std::size_t j = 0; j < jobs.size(); ++j) cells.push_back(run(j));

  Table dis = dislocation_table();
  Table gt{"gamma_comparison",
           {"pair", "k", "hbar", "b", "c", "b_resolution_warning", "b_hbar", "in_hypothesis", "gamma_q", "gamma_cl", "slack_lo", "slack_hi",
            "ell_q", "ell_cl", "energy_lo_slack", "energy_hi_slack"},
           {}};
  double w_lo = kInf, w_hi = kInf, w_energy = kInf;
  std::vector<int> covered(battery.size(), 0);
  for (const auto& cell : cells) {
    const auto& sc = consts[cell.pair];
    const double h = 1.0 / cell.k;
    const GammaComparison& g = cell.cmp;
    std::vector<std::string> row = {battery[cell.pair].name, std::to_string(cell.k), format_number(h),
                                    format_number(sc.b), format_number(sc.c), format_bool(sc.resolution_warning),
                                    format_number(sc.b * h),
                                    format_bool(cell.in_hypothesis)};
    if (!cell.in_hypothesis) {
      row.resize(gt.columns.size());
      gt.add(row);
      continue;
    }
    ++covered[cell.pair];
    w_lo = std::min(w_lo, g.slack_lo);
    w_hi = std::min(w_hi, g.slack_hi);
    w_energy = std::min({w_energy, g.energy_lo_slack, g.energy_hi_slack});
    for (double v : {g.gamma_q, g.gamma_cl, g.slack_lo, g.slack_hi, g.ell_q, g.ell_cl, g.energy_lo_slack,
                     g.energy_hi_slack})
      row.push_back(format_number(v));
    gt.add(row);

    DislocationRow d;
    d.experiment = std::string(kId) + ":" + battery[cell.pair].name;
    d.k = cell.k;
    d.ell_q = g.ell_q;
    d.ell_cl = g.ell_cl;
    d.gamma_q = g.gamma_q;
    d.gamma_cl = g.gamma_cl;
    d.b = g.b;
    d.c = g.c;
    d.slack_lo = g.slack_lo;
    d.slack_hi = g.slack_hi;
    d.seed = *cfg.seed;
    add_row(dis, d);
  }
  const int rows = static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const Cell& x) { return x.in_hypothesis; }));
  const std::string note = std::to_string(rows) + " of " + std::to_string(cells.size()) + " rows with b hbar < 1";
  r.add_verdict(c("overlap-ratio-lower"), "min slack", ">=", -kSlack, rows ? w_lo : std::nan(""), note);
  r.add_verdict(c("overlap-ratio-upper"), "min slack", ">=", -kSlack, rows ? w_hi : std::nan(""), note);
  r.add_verdict(c("energy-sandwich"), "min slack of both sides", ">=", -kSlack, rows ? w_energy : std::nan(""), note);
  const int uncovered = static_cast<int>(std::count(covered.begin(), covered.end(), 0));
  r.add_check(c("hypothesis-coverage"), "pairs with at least one row in b hbar < 1", uncovered == 0,
              std::to_string(battery.size() - uncovered) + " of " + std::to_string(battery.size()));
  r.log.push_back("constants alpha=" + format_number(K.alpha) + " beta=" + format_number(K.beta) +
                  " gamma=" + format_number(K.gamma));
  r.log.push_back("b shifts by more than 5% under grid refinement for: " + (unstable.empty() ? "none" : unstable));
  r.tables.push_back(std::move(gt));
  r.tables.push_back(std::move(dis));
  return r;
}

}  // namespace qsl::detail

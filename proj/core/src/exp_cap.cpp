#include <algorithm>
#include <cmath>

#include "experiments_impl.hpp"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/qstate.hpp"
#include "qsl/quantizer.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl::detail {

namespace {

const char* kId = "cap-dislocation";

struct CapCell {
  int k = 0;
  DislocationReport rep;
  double probe_mass = 0.0;
};

}  // namespace

ExperimentResult run_cap_dislocation(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  require(ctx.constants.has_value(), ErrorKind::CalibrationIndeterminate, std::string(kId) + " needs constants");
  const QuantizationConstants& K = *ctx.constants;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };

  const Observable u = parse_observable(cfg.selection("state", "cap(1, 0, 0, 0.3, 1.54)"));
  const Observable f = parse_observable(cfg.selection("hamiltonian", "rotation(0, 0, 1, pi)"));
  const Observable probe_region = parse_observable(cfg.selection("probe_region", "cap(-1, 0, 0, 0.2, 1.0)"));
  const double level = cfg.tolerance("level", 0.5);
  const double regime = cfg.tolerance("regime", 0.1);
  const double umax = uniform_norm(u);
  require(umax > 0.0, ErrorKind::ZeroFunction, "state density vanishes");
  const Observable g = (1.0 / umax) * u;

  const SemiclassicalConstants sc = semiclassical_constants(g, f, K);
  std::vector<SpherePoint> region;
  for (const Vec3& x : ProbeGrid::fibonacci(4000).points)
    if (g(x) > level) region.emplace_back(x);
  const DisplacementResult disp = displacement_check(f, region);

  const std::vector<int> probe_ks = int_list(cfg, "probe_k", {32});
  std::vector<int> all_ks = probe_ks;
  for (int k : cfg.ks)
    if (std::find(all_ks.begin(), all_ks.end(), k) == all_ks.end()) all_ks.push_back(k);
  std::sort(all_ks.begin(), all_ks.end());

  auto cell = [&](std::size_t i) {
    const auto space = QuantumSpace::build(all_ks[i], cfg.oversample);
    const DensityOperator theta = quantize_classical_state(*space, ClassicalState::from_density(space->quadrature_ptr(), u));
    CapCell out;
    out.k = all_ks[i];
    out.probe_mass = husimi_pairing(*space, theta, probe_region);
    if (std::find(cfg.ks.begin(), cfg.ks.end(), out.k) != cfg.ks.end())
      out.rep = run_dislocation(space, theta, f, cfg.steps, g);
    return out;
  };
  std::vector<CapCell> cells;
  if (ctx.pool)
    cells = ctx.pool->map(all_ks.size(), cell);
  else
    for (std::size_t i = 0; i < all_ks.size(); ++i) cells.push_back(cell(i));

  Table dis = dislocation_table();
  Table micro = microprobe_table();
  Table cert{"certified_displacement",
             {"k", "hbar", "fidelity", "in_regime", "gamma_q", "b_hbar", "certified_level", "energy_slack"},
             {}};
  std::vector<std::pair<double, double>> fid, masses;
  double worst_qsl = kInf, worst_energy = kInf;
  int in_regime = 0;
  for (const auto& cl : cells) {
    const double h = 1.0 / cl.k;
    masses.emplace_back(h, cl.probe_mass);
    micro.add({format_number(h), format_number(cl.probe_mass), probe_region.name()});
    if (std::find(cfg.ks.begin(), cfg.ks.end(), cl.k) == cfg.ks.end()) continue;
    const DislocationReport& rep = cl.rep;
    fid.emplace_back(h, rep.fidelity_a);
    const double bh = sc.b * h;
    DislocationRow row;
    row.experiment = kId;
    row.k = cl.k;
    row.fidelity = rep.fidelity_a;
    row.ell_q = rep.ell_q;
    row.ell_cl = rep.ell_cl;
    row.gamma_q = rep.gamma_q;
    row.gamma_cl = rep.gamma_cl.value_or(std::nan(""));
    row.b = sc.b;
    row.c = sc.c;
    row.slack_qsl = rep.slacks.at("qsl");
    if (bh < 1.0 && rep.gamma_cl) {
      row.slack_lo = rep.gamma_q - (*rep.gamma_cl - 3.0 * bh);
      row.slack_hi = (*rep.gamma_cl + 2.0 * bh) / ((1.0 - bh) * (1.0 - bh)) - rep.gamma_q;
    }
    row.seed = *cfg.seed;
    add_row(dis, row);
    worst_qsl = std::min(worst_qsl, row.slack_qsl);

    const bool regime_ok = rep.fidelity_a <= regime * h;
    const double energy_slack = rep.ell_q - (rep.ell_cl - sc.c * h);
    const double certified = bh < 1.0 ? 2.0 * std::sqrt(rep.gamma_q + 3.0 * bh) : std::nan("");
    if (regime_ok) {
      ++in_regime;
      worst_energy = std::min(worst_energy, energy_slack);
    }
    cert.add({std::to_string(cl.k), format_number(h), format_number(rep.fidelity_a), format_bool(regime_ok),
              format_number(rep.gamma_q), format_number(bh), format_number(certified), format_number(energy_slack)});
  }

  add_fit_verdict(r, c("displacement-dislocation"), "fidelity slope in hbar", fit_decay_order(fid, 4.0),
                  cfg.tolerance("slope", 4.0));
  r.add_check(c("certified-displacement"), "{u > lambda} displaced on every row with a <= regime*hbar",
              in_regime > 0 && disp.displaced,
              std::to_string(in_regime) + " rows in regime, lambda=" + format_number(level) +
                  ", separation=" + format_number(disp.min_separation));
  r.add_verdict(c("energy-lower-bound"), "min ell_q - (ell_cl - c hbar) over regime rows", ">=", -kSlack,
                in_regime > 0 ? worst_energy : std::nan(""), "c=" + format_number(sc.c));
  r.add_verdict(c("speed-limit-physical"), "min ell_q - arccos(a) hbar", ">=", -kSlack, worst_qsl);

  const DecayFit probe = fit_decay_order(masses, 4.0);
  r.log.push_back("microsupport probe on " + probe_region.name() + ": mass slope " + format_number(probe.slope) +
                  " r2 " + format_number(probe.r2));
  r.log.push_back("semiclassical constants b=" + format_number(sc.b) + " c=" + format_number(sc.c));
  r.plots.push_back({"fidelity", "hbar", "fidelity", fid});
  r.plots.push_back({"probe_mass", "hbar", "mass", masses});
  r.tables.push_back(std::move(dis));
  r.tables.push_back(std::move(micro));
  r.tables.push_back(std::move(cert));
  return r;
}

}  // namespace qsl::detail

#include <algorithm>
#include <cmath>

#include "experiments_impl.hpp"
#include "qsl/error.hpp"
#include "qsl/lagrangian.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl::detail {

namespace {

const char* kId = "lagrangian";

struct LagrangianCell {
  int k = 0;
  LagrangianOverlap p0, p1;
};

}  // namespace

ExperimentResult run_lagrangian(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };

  const std::vector<double> t0 = cfg.selection_list("t0", {1.0, 2.0});
  require(t0.size() == 2, ErrorKind::ConfigValidation, std::string(kId) + ": t0 is num, den");
  const LatitudeCircle circle =
      LatitudeCircle::make(Rational::make(static_cast<long>(t0[0]), static_cast<long>(t0[1])));
  const Plateau chi =
      latitude_cutoff(circle, cfg.tolerance("half_band", 0.6), cfg.tolerance("transition", 0.3));
  const Dislocator d = dislocator_profile(1e-10);

  std::vector<int> ks = cfg.ks;
  for (int k : ks)
    require(k % circle.k0 == 0, ErrorKind::ConfigValidation,
            std::string(kId) + ": k must be a multiple of " + std::to_string(circle.k0));
  require(ks.size() >= 3, ErrorKind::InsufficientSamples, std::string(kId) + " needs at least 3 levels");
  std::sort(ks.begin(), ks.end());

  const double mean = std::abs(circle_integral_complex([&](double th) { return std::exp(cplx(0.0, d.f0(th))); }));
  r.add_verdict(c("dislocator-mean"), "|integral of exp(i f0)|", "<=", 1e-8, mean,
                "s*=" + format_number(d.s_star));

  auto pool_map = [&](auto fn) {
    std::vector<LagrangianCell> out;
    if (ctx.pool) return ctx.pool->map(ks.size(), fn);
    for (std::size_t i = 0; i < ks.size(); ++i) out.push_back(fn(i));
    return out;
  };
  std::vector<LagrangianCell> cells = pool_map([&](std::size_t i) {
    const auto space = QuantumSpace::build(ks[i], cfg.oversample);
    LagrangianCell cell;
    cell.k = ks[i];
    cell.p0 = lagrangian_overlap(*space, lagrangian_state(*space, circle), d.f0, chi);
    return cell;
  });

  // The leading overlap is hbar z + o(hbar); z by Richardson on the last three levels.
  const std::size_t n = cells.size();
  auto q = [&](std::size_t i) { return cells[i].p0.overlap * static_cast<double>(cells[i].k); };
  const cplx r1 = 2.0 * q(n - 2) - q(n - 3);
  const cplx r2 = 2.0 * q(n - 1) - q(n - 2);
  const cplx z = (4.0 * r2 - r1) / 3.0;
  const ProfileFunction f1 = correction_profile(cplx(0.0, 2.0 * kPi) * z, d.s_star);

  const auto corrected = pool_map([&](std::size_t i) {
    const auto space = QuantumSpace::build(ks[i], cfg.oversample);
    LagrangianCell cell = cells[i];
    cell.p1 = lagrangian_overlap(*space, lagrangian_state(*space, circle), d.f0 + space->hbar() * f1, chi);
    return cell;
  });
  cells = corrected;

  Table sweep = sweep_table();
  Table lt{"lagrangian_overlap", {"k", "m", "hbar", "overlap_re", "overlap_im", "overlap_abs", "corrected_abs",
                                  "ell_q", "energy_ratio"}, {}};
  std::vector<std::pair<double, double>> p0, p1;
  double worst_qsl = kInf, ratio_lo = kInf, ratio_hi = 0.0;
  for (const auto& cell : cells) {
    const double h = 1.0 / cell.k;
    p0.emplace_back(h, std::abs(cell.p0.overlap));
    p1.emplace_back(h, std::abs(cell.p1.overlap));
    const double ratio = cell.p0.ell_q / (h * cell.p0.f_max);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    for (const LagrangianOverlap* o : {&cell.p0, &cell.p1})
      worst_qsl = std::min(worst_qsl, o->ell_q - std::acos(std::min(1.0, std::abs(o->overlap))) * h);
    lt.add({std::to_string(cell.k), std::to_string(cell.k / circle.k0), format_number(h),
            format_number(cell.p0.overlap.real()), format_number(cell.p0.overlap.imag()),
            format_number(std::abs(cell.p0.overlap)), format_number(std::abs(cell.p1.overlap)),
            format_number(cell.p0.ell_q), format_number(ratio)});
    SweepRow row;
    row.experiment = kId;
    row.k = cell.k;
    row.overlap = std::abs(cell.p0.overlap);
    row.fidelity = std::abs(cell.p0.overlap);
    row.ell_q = cell.p0.ell_q;
    row.window = "order-zero";
    add_row(sweep, row);
  }

  const DecayFit fit0 = fit_decay_order(p0, 0.8);
  const DecayFit fit1 = fit_decay_order(p1, 1.5);
  add_fit_verdict(r, c("lagrangian-order-zero"), "overlap slope in hbar", fit0, cfg.tolerance("order_zero_lo", 0.8),
                  cfg.tolerance("order_zero_hi", 1.3));
  Verdict& v = r.add_verdict(c("lagrangian-first-order"), "corrected slope minus uncorrected slope", ">=",
                             cfg.tolerance("raise", 0.7), fit1.slope - fit0.slope,
                             "corrected slope " + format_number(fit1.slope) + " r2 " + format_number(fit1.r2) +
                                 ", z=" + format_number(z.real()) + (z.imag() < 0 ? "" : "+") +
                                 format_number(z.imag()) + "i");
  if (fit1.r2 < kMinR2) v.pass = false;
  r.add_range_verdict(c("lagrangian-energy"), "ell_q / (hbar max|F|) range", 0.5, 2.0, ratio_lo,
                      "max " + format_number(ratio_hi));
  if (ratio_hi > 2.0) r.verdicts.back().pass = false;
  r.add_verdict(c("speed-limit-physical"), "min ell_q - arccos(|overlap|) hbar", ">=", -kSlack, worst_qsl);

  Table prof{"dislocator_profile", {"theta", "f0", "f1"}, {}};
  for (int i = 0; i < 512; ++i) {
    const double th = 2.0 * kPi * i / 512;
    prof.add({format_number(th), format_number(d.f0(th)), format_number(f1(th))});
  }
  r.plots.push_back({"overlap", "hbar", "abs_overlap", p0});
  r.plots.push_back({"corrected_overlap", "hbar", "abs_overlap", p1});
  r.tables.push_back(std::move(lt));
  r.tables.push_back(std::move(prof));
  r.tables.push_back(std::move(sweep));
  return r;
}

}  // namespace qsl::detail

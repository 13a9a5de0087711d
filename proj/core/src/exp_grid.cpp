#include <algorithm>
#include <cmath>

#include "experiments_impl.hpp"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/smallscale.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl::detail {

namespace {

const char* kId = "grid-superposition";

namespace ob = observables;

struct EnvelopeCell {
  int k = 0;
  double s = 0.0;
  double residual = 0.0;
};

// Basis of the envelope s^N + hbar + (hbar/s^2)^(1+N).
std::vector<double> envelope_basis(double s, double hbar, int order) {
  return {std::pow(s, order), hbar, std::pow(hbar / (s * s), 1.0 + order)};
}

template <class Job, class Fn>
auto pool_map(ThreadPool* pool, const std::vector<Job>& jobs, Fn fn) {
  using R = decltype(fn(jobs.front()));
  if (pool) return pool->map(jobs.size(), [&](std::size_t i) { return fn(jobs[i]); });
  std::vector<R> out;
  for (const auto& j : jobs) out.push_back(fn(j));
  return out;
}

}  // namespace

ExperimentResult run_grid_superposition(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };

  const EquatorialChart chart(0.0, cfg.tolerance("chart_radius", 0.99));
  const double env_outer = cfg.tolerance("envelope_outer", 0.9);
  const Observable envelope = ob::chart_bump(chart, Vec2(0.0, 0.0), 0.0, env_outer);
  Table sweep = sweep_table();

  // Pairing against a smooth symbol, with the envelope fitted on the small k
  // and checked on the rest.
  {
    const Observable g = ob::constant(1.0) + ob::coordinate(1) + 0.5 * ob::coordinate(2) * ob::coordinate(2);
    const std::vector<double> s_fixed = cfg.selection_list("s", {0.15, 0.2, 0.25, 0.3, 0.4});
    const int fit_k_max = static_cast<int>(cfg.tolerance("fit_k_max", 256));
    std::vector<std::pair<int, double>> jobs;
    for (int k : cfg.ks) {
      for (double s : s_fixed) jobs.emplace_back(k, s);
      jobs.emplace_back(k, std::pow(1.0 / k, 0.25));
    }
    const auto cells = pool_map(ctx.pool, jobs, [&](const std::pair<int, double>& j) {
      const auto space = QuantumSpace::build(j.first, cfg.oversample);
      const GridSpec spec = GridSpec::make(chart, j.second, envelope);
      const GridState st = grid_superposition(*space, spec);
      return EnvelopeCell{j.first, j.second, std::abs(grid_pairing_check(*space, spec, g, &st).residual)};
    });

    Table t{"grid_pairing", {"k", "hbar", "s", "residual", "order", "envelope", "ratio", "role"}, {}};
    double worst = 0.0;
    std::string worst_note;
    bool has_test = false;
    for (int order : {1, 2, 3}) {
      std::vector<std::vector<double>> cols(3);
      std::vector<double> y;
      for (const auto& cl : cells) {
        if (cl.k > fit_k_max) continue;
        const auto b = envelope_basis(cl.s, 1.0 / cl.k, order);
        const double w = 1.0 / std::max(cl.residual, kNoiseFloor);
        for (int j = 0; j < 3; ++j) cols[j].push_back(b[j] * w);
        y.push_back(1.0);
      }
      require(!y.empty(), ErrorKind::ConfigValidation, std::string(kId) + ": no k <= fit_k_max");
      const std::vector<double> coef = nnls(cols, y);
      auto model = [&](const EnvelopeCell& cl) {
        const auto b = envelope_basis(cl.s, 1.0 / cl.k, order);
        return coef[0] * b[0] + coef[1] * b[1] + coef[2] * b[2];
      };
      double train = 0.0;
      for (const auto& cl : cells)
        if (cl.k <= fit_k_max) train = std::max(train, cl.residual / model(cl));
      const double scale = 1.25 * train;
      for (const auto& cl : cells) {
        const bool test = cl.k > fit_k_max;
        const double bound = scale * model(cl);
        const double ratio = cl.residual / bound;
        t.add({std::to_string(cl.k), format_number(1.0 / cl.k), format_number(cl.s), format_number(cl.residual),
               std::to_string(order), format_number(bound), format_number(ratio), test ? "test" : "fit"});
        if (test) {
          has_test = true;
          if (ratio > worst) {
            worst = ratio;
            worst_note = "N=" + std::to_string(order) + " k=" + std::to_string(cl.k) + " s=" + format_number(cl.s);
          }
        }
      }
    }
    r.add_verdict(c("grid-pairing-envelope"), "max residual / fitted envelope on held-out k", "<=", 1.0,
                  has_test ? worst : std::nan(""), has_test ? worst_note : "no k above fit_k_max");
    r.tables.push_back(std::move(t));
  }

  // Pairing with a symbol supported next to the envelope.
  {
    const double width = cfg.tolerance("disjoint_width", 0.4);
    const double angle = chart_geodesic_radius(env_outer) + width;
    const Observable gd = ob::cap_bump(Vec3(std::cos(angle), std::sin(angle), 0.0), 0.0, width);
    const double s = cfg.tolerance("disjoint_s", 0.2);
    const GridSpec spec = GridSpec::make(chart, s, envelope);
    const auto vals = pool_map(ctx.pool, cfg.ks, [&](int k) {
      const auto space = QuantumSpace::build(k, cfg.oversample);
      const GridState st = grid_superposition(*space, spec);
      return std::pair<double, double>(1.0 / k, std::abs(grid_pairing_direct(*space, spec, gd, st)));
    });
    add_fit_verdict(r, c("grid-disjoint-pairing"), "pairing slope in hbar", fit_decay_order(vals, 4.0),
                    cfg.tolerance("disjoint_slope", 4.0));
    r.plots.push_back({"disjoint_pairing", "hbar", "pairing", vals});
  }

  // Translation by s under the chart translation generator.
  {
    const Observable f = ob::chart_translation(chart, 0.86, 0.97);
    const Observable tenv = ob::chart_bump(chart, Vec2(0.0, 0.0), 0.0, cfg.tolerance("translation_envelope", 0.66));
    const std::vector<int> ks = cfg.heavy ? int_list(cfg, "translation_k", {64, 128, 256, 512, 1024}) : cfg.ks;
    const double expo = cfg.tolerance("translation_exponent", 0.25);
    const auto rows = pool_map(ctx.pool, ks, [&](int k) {
      const auto space = QuantumSpace::build(k, cfg.oversample);
      const double s = std::pow(1.0 / k, expo);
      const GridSpec spec = GridSpec::make(chart, s, tenv);
      return std::pair<double, TranslationResult>(s, translation_dislocation(space, spec, f, 0.86));
    });
    std::vector<std::pair<double, double>> pts;
    double worst_qsl = kInf;
    const std::string window = "translation-k" + std::to_string(ks.front()) + "-" + std::to_string(ks.back());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double h = 1.0 / ks[i];
      const auto& [s, tr] = rows[i];
      pts.emplace_back(h / (s * s), tr.overlap_abs);
      worst_qsl = std::min(worst_qsl, tr.ell_q - std::acos(std::min(1.0, tr.overlap_abs)) * h);
      SweepRow row;
      row.experiment = kId;
      row.k = ks[i];
      row.s = s;
      row.overlap = tr.overlap_abs;
      row.fidelity = tr.overlap_abs;
      row.ell_q = tr.ell_q;
      row.window = window;
      add_row(sweep, row);
    }
    Verdict& v = add_fit_verdict(r, c("grid-translation"), "overlap slope in hbar/s^2", fit_decay_order(pts, 3.0),
                                 cfg.tolerance("translation_slope", 3.0));
    if (!cfg.heavy) v.note += "; heavy run extends k to 1024";
    r.add_verdict(c("speed-limit-physical"), "min ell_q - arccos(|overlap|) hbar", ">=", -kSlack, worst_qsl);
    r.plots.push_back({"translation_overlap", "hbar/s^2", "overlap", pts});
  }
  r.tables.push_back(std::move(sweep));
  return r;
}

}  // namespace qsl::detail

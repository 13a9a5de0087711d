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

namespace ob = observables;

const char* kId = "quantization-axioms";

// f = h(a.x) with the L1 norm and integral known in closed form up to a 1D
// integral of h, which is computed on panels split at the roots of h.
struct AxialTest {
  Observable f;
  std::function<double(double)> h;
  std::vector<double> roots;
};

double panel_integral(const std::function<double(double)>& fn, double a, double b) {
  static const auto nodes = [] {
    std::vector<double> x, w;
    gauss_legendre(32, x, w);
    return std::make_pair(x, w);
  }();
  const int panels = 64;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    for (std::size_t i = 0; i < nodes.first.size(); ++i)
      acc += 0.5 * (hi - lo) * nodes.second[i] * fn(0.5 * (hi + lo) + 0.5 * (hi - lo) * nodes.first[i]);
  }
  return acc;
}

// The measure is half the area, so the integral of h(a.x) is pi times that of h over [-1, 1].
double axial_integral(const AxialTest& t, bool absolute) {
  std::vector<double> cuts = {-1.0};
  for (double r : t.roots) cuts.push_back(r);
  cuts.push_back(1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += panel_integral([&](double u) { return absolute ? std::abs(t.h(u)) : t.h(u); }, cuts[i], cuts[i + 1]);
  return kPi * acc;
}

std::vector<AxialTest> trace_battery() {
  std::vector<AxialTest> out;
  auto add = [&](std::string name, Vec3 axis, std::function<double(double)> h, std::function<double(double)> dh,
                 std::vector<double> roots) {
    out.push_back({ob::axial(std::move(name), axis, h, dh), h, std::move(roots)});
  };
  add("x3", Vec3(0, 0, 1), [](double u) { return u; }, [](double) { return 1.0; }, {0.0});
  add("quadrupole", Vec3(1, 1, 0), [](double u) { return u * u - 1.0 / 3.0; }, [](double u) { return 2.0 * u; },
      {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)});
  add("cubic", Vec3(1, 2, 3), [](double u) { return u * u * u; }, [](double u) { return 3.0 * u * u; }, {0.0});
  add("1+x1", Vec3(1, 0, 0), [](double u) { return 1.0 + u; }, [](double) { return 1.0; }, {});
  const Plateau p(-1.2, 1.2, -0.3, 0.3);
  add(
      "cap", Vec3(0, 1, 0), [p](double u) { return p(std::acos(std::clamp(u, -1.0, 1.0))); },
      [p](double u) {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        return s > 0.0 ? -p.derivative(std::acos(std::clamp(u, -1.0, 1.0))) / s : 0.0;
      },
      {});
  return out;
}

struct AxiomsCell {
  double identity = 0.0, rawnsley = 0.0, min_positive_eig = 0.0;
};

}  // namespace

ExperimentResult run_quantization_axioms(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };
  const Observable x1 = ob::coordinate(0), x2 = ob::coordinate(1), x3 = ob::coordinate(2);

  // Identities at the configured k.
  {
    const ProbeGrid probes = ProbeGrid::fibonacci(400);
    const Observable g = ob::cap_bump(Vec3(1, 0, 0), 0.2, 0.9) + 0.5 * (x3 * x3);
    double id_worst = 0.0, r_worst = 0.0, pos_worst = kInf;
    for (int k : cfg.ks) {
      const auto space = QuantumSpace::build(k, cfg.oversample);
      const Matrix t1 = toeplitz(*space, ob::constant(1.0));
      id_worst = std::max(id_worst, op_norm_hermitian(t1 - Matrix::Identity(space->dim(), space->dim())));
      for (const Vec3& x : probes.points)
        r_worst = std::max(r_worst, std::abs(space->basis_eval(x).squaredNorm() - (k + 1) / (2.0 * kPi)));
      pos_worst = std::min(pos_worst, eigenvalues_hermitian(toeplitz(*space, g))[0]);
    }
    r.add_verdict(c("toeplitz-identity"), "max |T(1) - I|_op", "<=", 1e-10, id_worst);
    r.add_verdict(c("rawnsley-constant"), "max |R(x) - (k+1)/(2 pi)|", "<=", 1e-9, r_worst, "400 probe points");
    r.add_verdict(c("toeplitz-positivity"), "min eigenvalue of T(g), g >= 0", ">=", -1e-10, pos_worst);
  }

  // Residual orders over the sweep.
  const std::vector<int> sweep = int_list(cfg, "sweep_k", {32, 64, 128, 256, 512});
  const std::vector<Observable> garding = {x3, x1 * x1, x1 * x2 + x3};
  const std::vector<Observable> berezin = {x3 * x3, x1 * x1, x1 * x2 + x3};
  const std::vector<std::pair<Observable, Observable>> pairs = {
      {x1, x2}, {x3, x1 * x2}, {x1 * x1, x3}, {x1 + x2, x3 * x3}, {ob::cap_bump(Vec3(0, 0, 1), 0.3, 1.2), x1}};
  const std::vector<AxialTest> traces = trace_battery();
  std::vector<double> garding_max, l1, integral;
  for (const auto& f : garding) garding_max.push_back(uniform_norm(f));
  for (const auto& t : traces) {
    l1.push_back(axial_integral(t, true));
    integral.push_back(axial_integral(t, false));
  }
  const ProbeGrid probes = ProbeGrid::fibonacci(400);

  struct SweepCell {
    std::vector<double> p1, b, p2, p3, trace_norm, trace;
  };
  auto cell = [&](std::size_t i) {
    const auto space = QuantumSpace::build(sweep[i], cfg.oversample);
    const double h = space->hbar();
    SweepCell out;
    for (std::size_t j = 0; j < garding.size(); ++j)
      out.p1.push_back(garding_max[j] - op_norm_hermitian(toeplitz(*space, garding[j])));
    for (const auto& f : berezin) {
      const Matrix tf = toeplitz(*space, f);
      double worst = 0.0;
      for (const Vec3& x : probes.points)
        worst = std::max(worst, std::abs(berezin_transform(*space, tf, SpherePoint(x)) - f(x)));
      out.b.push_back(worst);
    }
    for (const auto& [f, g] : pairs) {
      const Matrix tf = toeplitz(*space, f), tg = toeplitz(*space, g);
      out.p2.push_back(op_norm((tf * tg - tg * tf) * cplx(0.0, -1.0 / h) - toeplitz(*space, poisson_bracket(f, g))));
      out.p3.push_back(op_norm(toeplitz(*space, f * g) - tf * tg));
    }
    for (const auto& t : traces) {
      const RealVector ev = eigenvalues_hermitian(toeplitz(*space, t.f));
      out.trace_norm.push_back(ev.cwiseAbs().sum());
      out.trace.push_back(ev.sum());
    }
    return out;
  };
  const std::vector<SweepCell> cells = ctx.pool ? ctx.pool->map(sweep.size(), cell) : [&] {
    std::vector<SweepCell> v;
    for (std::size_t i = 0; i < sweep.size(); ++i) v.push_back(cell(i));
    return v;
  }();

  Table orders{"residual_orders", {"k", "hbar", "estimate", "function", "residual"}, {}};
  auto fit_series = [&](const char* claim_id, const char* estimate, std::size_t n,
                        const std::function<std::string(std::size_t)>& name,
                        const std::function<double(const SweepCell&, std::size_t)>& value) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        const double h = 1.0 / sweep[i];
        pts.emplace_back(h, value(cells[i], j));
        orders.add({std::to_string(sweep[i]), format_number(h), estimate, name(j), format_number(value(cells[i], j))});
      }
      add_fit_verdict(r, c(claim_id), std::string("slope:") + name(j), fit_decay_order(pts, 0.8),
                      cfg.tolerance("slope_lo", 0.8), cfg.tolerance("slope_hi", 1.5));
      r.plots.push_back({std::string(estimate) + "_" + std::to_string(j), "hbar", "residual", pts});
    }
  };
  fit_series("garding-order", "garding", garding.size(), [&](std::size_t j) { return garding[j].name(); },
             [](const SweepCell& s, std::size_t j) { return s.p1[j]; });
  fit_series("berezin-order", "berezin", berezin.size(), [&](std::size_t j) { return berezin[j].name(); },
             [](const SweepCell& s, std::size_t j) { return s.b[j]; });
  auto pair_name = [&](std::size_t j) { return pairs[j].first.name() + ";" + pairs[j].second.name(); };
  fit_series("commutator-order", "commutator", pairs.size(), pair_name,
             [](const SweepCell& s, std::size_t j) { return s.p2[j]; });
  fit_series("product-order", "product", pairs.size(), pair_name,
             [](const SweepCell& s, std::size_t j) { return s.p3[j]; });
  r.tables.push_back(std::move(orders));

  // Trace sandwich: one constant per side and function, fitted on k <= fit_k_max
  // and checked over the whole sweep.
  {
    const int fit_max = static_cast<int>(cfg.tolerance("fit_k_max", 128));
    Table tt{"trace_sandwich",
             {"function", "k", "hbar", "l1", "scaled_trace_norm", "integral", "scaled_trace", "c_lo", "c_hi", "c_tr"},
             {}};
    double worst_lo = kInf, worst_hi = kInf, worst_tr = kInf;
    for (std::size_t j = 0; j < traces.size(); ++j) {
      double c_lo = 0.0, c_hi = 0.0, c_tr = 0.0;
      int fitted = 0;
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (sweep[i] > fit_max) continue;
        const double h = 1.0 / sweep[i];
        const double tn = 2.0 * kPi * h * cells[i].trace_norm[j];
        const double tr = 2.0 * kPi * h * cells[i].trace[j];
        c_lo = std::max(c_lo, (l1[j] - tn) / h);
        c_hi = std::max(c_hi, (tn / l1[j] - 1.0) / h);
        c_tr = std::max(c_tr, std::abs(tr - integral[j]) / h);
        ++fitted;
      }
      require(fitted > 0, ErrorKind::ConfigValidation, std::string(kId) + ": no k below fit_k_max");
      c_lo *= 1.25;
      c_hi *= 1.25;
      c_tr *= 1.25;
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        const double h = 1.0 / sweep[i];
        const double tn = 2.0 * kPi * h * cells[i].trace_norm[j];
        const double tr = 2.0 * kPi * h * cells[i].trace[j];
        worst_lo = std::min(worst_lo, tn - (l1[j] - c_lo * h));
        worst_hi = std::min(worst_hi, l1[j] * (1.0 + c_hi * h) - tn);
        worst_tr = std::min(worst_tr, c_tr * h - std::abs(tr - integral[j]));
        tt.add({traces[j].f.name(), std::to_string(sweep[i]), format_number(h), format_number(l1[j]),
                format_number(tn), format_number(integral[j]), format_number(tr), format_number(c_lo),
                format_number(c_hi), format_number(c_tr)});
      }
    }
    const std::string note = "constants fitted on k <= " + std::to_string(fit_max) + ", x1.25";
    r.add_verdict(c("trace-sandwich-lower"), "min slack over functions and k", ">=", -kSlack, worst_lo, note);
    r.add_verdict(c("trace-sandwich-upper"), "min slack over functions and k", ">=", -kSlack, worst_hi, note);
    r.add_verdict(c("trace-correspondence"), "min slack over functions and k", ">=", -kSlack, worst_tr, note);
    r.tables.push_back(std::move(tt));
  }

  // Fidelity of quantized smooth densities against the fine-quadrature oracle.
  {
    const std::vector<int> fks = int_list(cfg, "fidelity_k", {64, 256});
    require(fks.size() >= 2, ErrorKind::ConfigValidation, std::string(kId) + ": fidelity_k needs two levels");
    const Observable g1 = ob::constant(1.0) + 0.5 * x3, g2 = ob::constant(1.0) + 0.5 * x1;
    const auto fine = fine_rule();
    const double n1 = integrate(*fine, g1), n2 = integrate(*fine, g2);
    const Observable root = Observable::autonomous(
        "sqrt(g1 g2)", [=](const Vec3& x) { return std::sqrt(std::max(0.0, g1(x) * g2(x)) / (n1 * n2)); });
    const double target = integrate(*fine, root);
    Table ft{"fidelity_estimate", {"k", "hbar", "fidelity", "target", "error"}, {}};
    std::vector<double> errs;
    for (int k : fks) {
      const auto space = QuantumSpace::build(k, cfg.oversample);
      const DensityOperator a = quantize_classical_state(*space, ClassicalState::from_density(space->quadrature_ptr(), g1));
      const DensityOperator b = quantize_classical_state(*space, ClassicalState::from_density(space->quadrature_ptr(), g2));
      const double phi = fidelity(a, b);
      errs.push_back(std::abs(phi - target));
      ft.add({std::to_string(k), format_number(1.0 / k), format_number(phi), format_number(target),
              format_number(errs.back())});
    }
    const double ratio = errs.front() / errs.back();
    r.add_verdict(c("fidelity-estimate"),
                  "error ratio k=" + std::to_string(fks.front()) + " / k=" + std::to_string(fks.back()), ">=",
                  cfg.tolerance("fidelity_ratio", 1.8), ratio);
    r.tables.push_back(std::move(ft));
  }
  return r;
}

}  // namespace qsl::detail

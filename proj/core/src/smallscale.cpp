#include "qsl/smallscale.hpp"

#include <algorithm>
#include <cmath>

#include "qsl/error.hpp"
#include "qsl/qstate.hpp"

namespace qsl {

GridSpec GridSpec::make(const EquatorialChart& chart, double s, const Observable& envelope) {
  require(s >= 1e-4 && s <= 1.0, ErrorKind::InvalidArgument, "grid mesh must lie in [1e-4, 1]");
  require_inside_chart(envelope, chart);
  const double mass = integrate(*fine_rule(), envelope * envelope);
  require(mass > 0.0, ErrorKind::ZeroFunction, "envelope vanishes");

  GridSpec spec{chart, s, (1.0 / std::sqrt(mass)) * envelope, {}};
  const int n = static_cast<int>(std::floor(chart.radius() / s));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const Vec2 X(i * s, j * s);
      if (X.norm() < chart.radius()) spec.points.push_back(X);
    }
  return spec;
}

GridState grid_superposition(const QuantumSpace& space, const GridSpec& spec) {
  GridState out;
  out.psi = Vector::Zero(space.dim());
  for (const Vec2& X : spec.points) {
    const Vec3 x = spec.chart.from_chart(X);
    const double v = spec.envelope(x);
    if (v == 0.0) continue;
    out.psi += (spec.s * v) * coherent_state(space, x);
    ++out.active_points;
  }
  require(out.active_points > 0, ErrorKind::InvalidArgument, "grid has no points in the envelope support");
  out.norm = out.psi.norm();
  return out;
}

PairingCheck grid_pairing_check(const QuantumSpace& space, const GridSpec& spec, const Observable& g,
                                const GridState* state) {
  const GridState local = state ? GridState{} : grid_superposition(space, spec);
  const GridState& st = state ? *state : local;
  const Matrix tg = toeplitz(space, g);
  PairingCheck r;
  r.value = st.psi.dot(tg * st.psi).real() / (st.norm * st.norm);
  r.target = integrate(*fine_rule(), g * spec.envelope * spec.envelope);
  r.residual = std::abs(r.value - r.target);
  return r;
}

namespace {

struct Spinor {
  double c = 1.0, s = 0.0;
  cplx e{1.0, 0.0};
};

Spinor spinor(const Vec3& x) {
  Spinor p;
  p.c = std::sqrt(std::max(0.0, 0.5 * (1.0 + x[2])));
  p.s = std::sqrt(std::max(0.0, 0.5 * (1.0 - x[2])));
  const double rho = std::hypot(x[0], x[1]);
  if (rho > 0.0) p.e = cplx(x[0] / rho, x[1] / rho);
  return p;
}

}  // namespace

double grid_pairing_direct(const QuantumSpace& space, const GridSpec& spec, const Observable& g,
                           const GridState& state) {
  // xi_y(x) = sqrt(R) (c_y c_x + s_y s_x e_x conj(e_y))^k, times e_y^k when
  // coherent_state picked the south gauge at y.
  struct Term {
    Spinor p;
    cplx coeff;
  };
  std::vector<Term> terms;
  const int k = space.k();
  for (const Vec2& X : spec.points) {
    const Vec3 y = spec.chart.from_chart(X);
    const double v = spec.envelope(y);
    if (v == 0.0) continue;
    const Spinor p = spinor(y);
    const cplx gauge = y[2] >= 0.0 ? cplx(1.0, 0.0) : std::pow(p.e, k);
    terms.push_back({p, spec.s * v * gauge});
  }
  const QuadratureRule& rule = space.quadrature();
  const double sqrt_r = std::sqrt(space.rawnsley());
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double gv = g(rule.nodes[i]);
    if (gv == 0.0) continue;
    const Spinor q = spinor(rule.nodes[i]);
    cplx psi = 0.0;
    for (const Term& t : terms) psi += t.coeff * std::pow(t.p.c * q.c + t.p.s * q.s * q.e * std::conj(t.p.e), k);
    acc += rule.weights[i] * gv * std::norm(sqrt_r * psi);
  }
  return acc / (state.norm * state.norm);
}

namespace {

double envelope_chart_reach(const GridSpec& spec) {
  double reach = 0.0;
  const double h = 0.005;
  const int n = static_cast<int>(std::ceil(spec.chart.radius() / h));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const Vec2 X(i * h, j * h);
      if (X.norm() >= spec.chart.radius()) continue;
      if (spec.envelope(spec.chart.from_chart(X)) != 0.0) reach = std::max(reach, X.norm() + h);
    }
  return reach;
}

}  // namespace

TranslationResult translation_dislocation(const std::shared_ptr<const QuantumSpace>& space, const GridSpec& spec,
                                          const Observable& f, double translation_inner) {
  require(envelope_chart_reach(spec) + 0.5 * spec.s < translation_inner, ErrorKind::ChartOverflow,
          "translated envelope leaves the translation region");
  const GridState st = grid_superposition(*space, spec);
  const auto path = QuantumHamiltonianPath::toeplitz_path(space, f);
  const Propagator p = propagate(path, 0.0, spec.s, 1);
  TranslationResult r;
  r.overlap = st.psi.dot(p.unitary * st.psi) / (st.norm * st.norm);
  r.overlap_abs = std::abs(r.overlap);
  r.ell_q = spec.s * op_norm_hermitian(path.generator(0.0));
  return r;
}

double lattice_gaussian_sum(double a) {
  require(a > 0.0, ErrorKind::InvalidArgument, "lattice sum needs a positive exponent");
  double theta = 1.0;
  for (int n = 1;; ++n) {
    const double term = 2.0 * std::exp(-a * n * n);
    theta += term;
    if (term < 1e-18 * theta) break;
  }
  return theta * theta - 1.0;
}

std::vector<SpherePoint> superlevel_samples(const Observable& u, const EquatorialChart& chart, double level, double s,
                                            double spacing) {
  std::vector<SpherePoint> out;
  const int n = static_cast<int>(std::ceil(chart.radius() / spacing));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const Vec2 X(i * spacing, j * spacing);
      if (X.norm() >= chart.radius()) continue;
      if (u(chart.from_chart(X)) > level) out.emplace_back(chart.from_chart(s * X));
    }
  return out;
}

RescaledResult rescaled_experiment(const RescaledExperiment& ex, double threshold) {
  require(ex.ks.size() >= 4, ErrorKind::InsufficientSamples, "rescaled sweep needs at least 4 levels");
  require_inside_chart(ex.hamiltonian, ex.chart);
  require_inside_chart(ex.density, ex.chart);
  const auto base_region = superlevel_samples(ex.density, ex.chart, ex.level, 1.0);
  require(!base_region.empty(), ErrorKind::InvalidArgument, "superlevel set is empty");
  require(displacement_check(ex.hamiltonian, base_region).displaced, ErrorKind::HypothesisViolated,
          "the Hamiltonian does not displace the superlevel set");
  const double fmax = uniform_norm(ex.hamiltonian);

  RescaledResult res;
  std::vector<std::pair<double, double>> by_hbar, by_s2;
  for (int k : ex.ks) {
    const auto space = QuantumSpace::build(k, ex.oversample);
    RescaledRow row;
    row.k = k;
    row.hbar = space->hbar();
    row.s = ex.s_rule(row.hbar);
    row.s2inv_hbar = row.hbar / (row.s * row.s);
    const Observable fs = rescale(ex.hamiltonian, ex.chart, row.s);
    const ClassicalState tau =
        rescale(ClassicalState::from_density(space->quadrature_ptr(), ex.density), ex.chart, row.s);
    const DensityOperator theta = quantize_classical_state(*space, tau);
    const DislocationReport rep = run_dislocation(space, theta, fs, ex.steps);
    row.fidelity = rep.fidelity_a;
    row.ell_q = rep.ell_q;
    row.energy_cap = row.s * row.s * fmax;
    std::vector<SpherePoint> region;
    region.reserve(base_region.size());
    for (const auto& x : base_region)
      region.emplace_back(ex.chart.from_chart(row.s * ex.chart.to_chart(x.vec())));
    const DisplacementResult d = displacement_check(fs, region, 1e-3 * row.s);
    row.displaced = d.displaced;
    row.separation = d.min_separation;
    by_hbar.emplace_back(row.hbar, row.fidelity);
    by_s2.emplace_back(row.s2inv_hbar, row.fidelity);
    res.rows.push_back(row);
  }
  res.fit_hbar = fit_decay_order(by_hbar, threshold);
  const auto [lo, hi] = std::minmax_element(by_s2.begin(), by_s2.end());
  if (hi->first > 1.01 * lo->first) res.fit_s2inv = fit_decay_order(by_s2, threshold);
  return res;
}

}  // namespace qsl

#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "qsl/error.hpp"
#include "qsl/qstate.hpp"

namespace qsl {

QuantumHamiltonianPath QuantumHamiltonianPath::constant(Matrix f, double hbar) {
  auto m = std::make_shared<const Matrix>(std::move(f));
  return {[m](double) { return *m; }, hbar, true};
}

QuantumHamiltonianPath QuantumHamiltonianPath::time_dependent(std::function<Matrix(double)> f, double hbar) {
  return {std::move(f), hbar, false};
}

QuantumHamiltonianPath QuantumHamiltonianPath::toeplitz_path(std::shared_ptr<const QuantumSpace> space,
                                                             const Observable& f) {
  if (!f.is_time_dependent()) return constant(toeplitz(*space, f), space->hbar());
  return {[space, f](double t) { return toeplitz(*space, f, t); }, space->hbar(), false};
}

namespace {

double unitarity_drift(const Matrix& u) {
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return op_norm_hermitian(d);
}

Propagator run_propagation(const QuantumHamiltonianPath& h, double t0, double t1, int steps, bool history) {
  require(steps >= 1, ErrorKind::InvalidArgument, "propagation needs steps >= 1");
  Propagator p;
  p.t0 = t0;
  p.t1 = t1;
  p.steps = steps;
  if (h.autonomous) {
    const Matrix f = h.generator(t0);
    const HermitianEig e = eig_hermitian(hermitian_part(f));
    if (history) {
      const double dt = (t1 - t0) / steps;
      for (int i = 0; i <= steps; ++i) p.history.push_back(unitary_exp(e, i * dt / h.hbar));
      p.generators.assign(static_cast<std::size_t>(steps), f);
      p.unitary = p.history.back();
    } else {
      p.unitary = unitary_exp(e, (t1 - t0) / h.hbar);
    }
  } else {
    const double dt = (t1 - t0) / steps;
    Matrix u;
    for (int i = 0; i < steps; ++i) {
      const Matrix f = h.generator(t0 + (i + 0.5) * dt);
      const Matrix step = unitary_exp(eig_hermitian(hermitian_part(f)), dt / h.hbar);
      if (i == 0) {
        u = Matrix::Identity(f.rows(), f.cols());
        if (history) p.history.push_back(u);
      }
      u = step * u;
      if (history) {
        p.history.push_back(u);
        p.generators.push_back(f);
      }
    }
    p.unitary = std::move(u);
  }
  p.unitarity_drift = unitarity_drift(p.unitary);
  require(p.unitarity_drift <= 1e-9, ErrorKind::IntegrationQuality,
          "unitarity drift " + std::to_string(p.unitarity_drift));
  return p;
}

double clamped_arccos(double a) { return std::acos(std::clamp(a, 0.0, 1.0)); }

}  // namespace

Propagator propagate(const QuantumHamiltonianPath& h, double t0, double t1, int steps) {
  return run_propagation(h, t0, t1, steps, false);
}

Propagator propagate_with_history(const QuantumHamiltonianPath& h, double t0, double t1, int steps) {
  return run_propagation(h, t0, t1, steps, true);
}

double quantum_energy(const QuantumHamiltonianPath& h, int steps) {
  if (h.autonomous) return op_norm_hermitian(h.generator(0.0));
  int n = std::max(2, steps);
  if (n % 2) ++n;
  const double dt = 1.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * op_norm_hermitian(h.generator(i * dt));
  }
  return acc * dt / 3.0;
}

DislocationReport run_dislocation(const std::shared_ptr<const QuantumSpace>& space, const DensityOperator& theta,
                                  const Observable& f, int steps, const std::optional<Observable>& g) {
  require(theta.dim() == space->dim(), ErrorKind::DimensionMismatch, "state does not match the space");
  const auto path = QuantumHamiltonianPath::toeplitz_path(space, f);
  DislocationReport r;
  Matrix u;
  if (path.autonomous) {
    const Matrix fm = path.generator(0.0);
    const HermitianEig e = eig_hermitian(fm);
    u = unitary_exp(e, 1.0 / path.hbar);
    const double drift = unitarity_drift(u);
    require(drift <= 1e-9, ErrorKind::IntegrationQuality, "unitarity drift " + std::to_string(drift));
    r.ell_q = std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
  } else {
    u = propagate(path, 0.0, 1.0, steps).unitary;
    r.ell_q = quantum_energy(path, steps);
  }
  const DensityOperator sigma = theta.conjugated(u);
  r.fidelity_a = fidelity(theta, sigma);
  r.gamma_q = gamma_q(theta, sigma);
  r.ell_cl = hofer_length(f);
  if (g) r.gamma_cl = gamma_cl(*g, transport(*g, f, 1.0));
  r.slacks["qsl"] = r.ell_q - clamped_arccos(r.fidelity_a) * space->hbar();
  return r;
}

EgorovResult egorov_residual(const std::shared_ptr<const QuantumSpace>& space, const Observable& f,
                             const Observable& g, int steps, const EgorovOptions& opts) {
  const auto path = QuantumHamiltonianPath::toeplitz_path(space, f);
  const Matrix u = propagate(path, 0.0, 1.0, steps).unitary;
  const Matrix lhs = toeplitz(*space, transport(g, f, 1.0));
  const Matrix rhs = u * toeplitz(*space, g) * u.adjoint();
  EgorovResult r;
  r.residual = op_norm_hermitian(hermitian_part(lhs - rhs));
  if (opts.with_bound) {
    static const ProbeGrid fallback = ProbeGrid::fibonacci(3000);
    const ProbeGrid& grid = opts.grid ? *opts.grid : fallback;
    int n = std::max(2, opts.time_samples);
    if (n % 2) ++n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const CkNorms nf = ck_norms(f, 3, grid, t);
      const CkNorms ng = ck_norms(transport(g, f, t), 3, grid);
      r.resolution_warning = r.resolution_warning || nf.resolution_warning || ng.resolution_warning;
      acc += w * pair_norm_13(nf, ng);
    }
    r.bound_integrand = acc / (3.0 * n);
  }
  return r;
}

UhlmannResult uhlmann_bound(const QuantumHamiltonianPath& h, const DensityOperator& theta, int steps) {
  const Propagator p = propagate_with_history(h, 0.0, 1.0, steps);
  const double dt = 1.0 / steps;
  UhlmannResult r;
  // On each step the generator is constant, so the variance of F in the
  // evolving state is constant there and the integral is an exact sum.
  for (int i = 0; i < steps; ++i) {
    const Matrix& f = p.generators[static_cast<std::size_t>(i)];
    const Matrix& u = p.history[static_cast<std::size_t>(i)];
    const Matrix th = u * theta.matrix() * u.adjoint();
    const Matrix m = f * th;
    const double mean = m.trace().real();
    const double second = (f.transpose().cwiseProduct(m)).sum().real();
    r.integral_I += dt * std::sqrt(std::max(0.0, second - mean * mean));
    r.ell_q += dt * op_norm_hermitian(f);
    if (h.autonomous) {
      r.integral_I *= steps;
      r.ell_q *= steps;
      break;
    }
  }
  const DensityOperator sigma = theta.conjugated(p.unitary);
  r.fidelity_a = fidelity(theta, sigma);
  r.arccos_term = clamped_arccos(r.fidelity_a) * h.hbar;
  r.holds = r.integral_I >= r.arccos_term - 1e-9;
  r.below_energy = r.integral_I <= r.ell_q + 1e-9;
  return r;
}

namespace {

const ProbeGrid& constants_grid(const ConstantsOptions& opts) {
  static const ProbeGrid fallback = ProbeGrid::fibonacci(3000);
  return opts.grid ? *opts.grid : fallback;
}

SemiclassicalConstants evaluate_constants(const Observable& g, const Observable& f, const QuantizationConstants& k,
                                          const ProbeGrid& grid, int time_samples) {
  SemiclassicalConstants s;
  const Observable gphi = transport(g, f, 1.0);
  const CkNorms ng = ck_norms(g, 3, grid);
  const CkNorms ngphi = ck_norms(gphi, 3, grid);
  const CkNorms nprod = ck_norms(g * gphi, 2, grid);
  bool warn = ng.resolution_warning || ngphi.resolution_warning || nprod.resolution_warning;

  int n = std::max(2, time_samples);
  if (n % 2) ++n;
  double bracket = 0.0, energy = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const CkNorms nf = ck_norms(f, 3, grid, t);
    const CkNorms ngt = i == 0 ? ng : (i == n ? ngphi : ck_norms(transport(g, f, t), 3, grid));
    warn = warn || nf.resolution_warning || ngt.resolution_warning;
    bracket += w * pair_norm_13(nf, ngt);
    energy += w * nf[2];
  }
  bracket /= 3.0 * n;
  energy /= 3.0 * n;

  s.terms = {k.alpha * ng[2], k.alpha * ngphi[2], k.alpha * nprod[2], k.beta * bracket,
             k.gamma * pair_norm(ng, ngphi, 2)};
  s.b = *std::max_element(s.terms.begin(), s.terms.end());
  s.c = k.alpha * energy;
  s.resolution_warning = warn;
  return s;
}

}  // namespace

SemiclassicalConstants semiclassical_constants(const Observable& g, const Observable& f,
                                               const QuantizationConstants& k, const ConstantsOptions& opts) {
  const ProbeGrid& grid = constants_grid(opts);
  SemiclassicalConstants s = evaluate_constants(g, f, k, grid, opts.time_samples);
  if (opts.check_resolution) {
    const ProbeGrid fine = ProbeGrid::fibonacci(static_cast<int>(2 * grid.points.size()));
    const SemiclassicalConstants s2 = evaluate_constants(g, f, k, fine, opts.time_samples);
    if (std::abs(s2.b - s.b) > 0.05 * std::max(s.b, s2.b)) s.resolution_warning = true;
  }
  return s;
}

GammaComparison gamma_comparison(const std::shared_ptr<const QuantumSpace>& space, const Observable& g,
                                 const Observable& f, int steps, const QuantizationConstants& k,
                                 const std::optional<SemiclassicalConstants>& precomputed,
                                 const ConstantsOptions& opts) {
  const double gmax = uniform_norm(g);
  require(std::abs(gmax - 1.0) <= 1e-6, ErrorKind::HypothesisViolated, "comparison needs max g = 1");
  for (const Vec3& x : default_probe_grid().points)
    require(g(x) >= -1e-12, ErrorKind::HypothesisViolated, "comparison needs g >= 0");
  const SemiclassicalConstants sc = precomputed ? *precomputed : semiclassical_constants(g, f, k, opts);
  const double hbar = space->hbar();
  require(sc.b * hbar < 1.0, ErrorKind::HypothesisViolated, "b hbar >= 1");

  const auto path = QuantumHamiltonianPath::toeplitz_path(space, f);
  const Matrix theta = toeplitz(*space, g);
  Matrix u;
  GammaComparison r;
  if (path.autonomous) {
    const HermitianEig e = eig_hermitian(path.generator(0.0));
    u = unitary_exp(e, 1.0 / hbar);
    r.ell_q = std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
  } else {
    u = propagate(path, 0.0, 1.0, steps).unitary;
    r.ell_q = quantum_energy(path, steps);
  }
  const Matrix sigma = hermitian_part(u * theta * u.adjoint());
  r.gamma_q = gamma_q(theta, sigma);
  r.gamma_cl = gamma_cl(g, transport(g, f, 1.0));
  r.b = sc.b;
  r.c = sc.c;
  r.hbar = hbar;
  const double bh = sc.b * hbar;
  r.slack_lo = r.gamma_q - (r.gamma_cl - 3.0 * bh);
  r.slack_hi = (r.gamma_cl + 2.0 * bh) / ((1.0 - bh) * (1.0 - bh)) - r.gamma_q;
  r.ell_cl = hofer_length(f);
  r.energy_lo_slack = r.ell_q - (r.ell_cl - sc.c * hbar);
  r.energy_hi_slack = r.ell_cl - r.ell_q;
  return r;
}

}  // namespace qsl

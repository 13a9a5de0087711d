#include "qsl/quantizer.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "qsl/error.hpp"

namespace qsl {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct HalfAngles {
  double c, s;  // cos(theta/2), sin(theta/2)
};

HalfAngles half_angles(double z) {
  return {std::sqrt(std::max(0.0, 0.5 * (1.0 + z))), std::sqrt(std::max(0.0, 0.5 * (1.0 - z)))};
}

// c_m cos^{k-m} sin^m evaluated in log space.
void radial_profile(int k, const std::vector<double>& log_norm, HalfAngles h, double* out) {
  const double lc = h.c > 0.0 ? std::log(h.c) : -INFINITY;
  const double ls = h.s > 0.0 ? std::log(h.s) : -INFINITY;
  for (int m = 0; m <= k; ++m) {
    double e = log_norm[static_cast<std::size_t>(m)];
    if (k - m > 0) e += (k - m) * lc;
    if (m > 0) e += m * ls;
    out[m] = std::exp(e);
  }
}

}  // namespace

std::shared_ptr<const QuantumSpace> QuantumSpace::build(int k, double oversample, int max_level) {
  require(k >= 2 && k <= max_level, ErrorKind::Capacity,
          "level k=" + std::to_string(k) + " outside [2, " + std::to_string(max_level) + "]");
  require(oversample >= 1.0, ErrorKind::InvalidArgument, "oversample must be >= 1");
  auto sp = std::shared_ptr<QuantumSpace>(new QuantumSpace());
  sp->k_ = k;
  const int n_theta = static_cast<int>(std::ceil(oversample * (k + 2)));
  const int n_phi = static_cast<int>(std::ceil(oversample * (2 * k + 4)));
  sp->rule_ = std::make_shared<const QuadratureRule>(QuadratureRule::product(n_theta, n_phi));
  sp->log_norm_.resize(static_cast<std::size_t>(k + 1));
  const double base = std::log((k + 1) / (2.0 * kPi));
  for (int m = 0; m <= k; ++m)
    sp->log_norm_[static_cast<std::size_t>(m)] =
        0.5 * (base + std::lgamma(k + 1.0) - std::lgamma(m + 1.0) - std::lgamma(k - m + 1.0));
  sp->radial_.resize(n_theta, k + 1);
  std::vector<double> row(static_cast<std::size_t>(k + 1));
  for (int j = 0; j < n_theta; ++j) {
    radial_profile(k, sp->log_norm_, half_angles(sp->rule_->cos_theta[static_cast<std::size_t>(j)]),
                   row.data());
    for (int m = 0; m <= k; ++m) sp->radial_(j, m) = row[static_cast<std::size_t>(m)];
  }
  return sp;
}

Vector QuantumSpace::basis_eval(const Vec3& x, Gauge gauge) const {
  std::vector<double> r(static_cast<std::size_t>(k_ + 1));
  radial_profile(k_, log_norm_, half_angles(x[2]), r.data());
  const double rho = std::hypot(x[0], x[1]);
  const cplx e = rho > 0.0 ? cplx(x[0] / rho, x[1] / rho) : cplx(1.0, 0.0);
  Vector v(k_ + 1);
  cplx phase = gauge == Gauge::North ? cplx(1.0, 0.0) : std::pow(std::conj(e), k_);
  for (int m = 0; m <= k_; ++m) {
    v[m] = r[static_cast<std::size_t>(m)] * phase;
    phase *= e;
  }
  return v;
}

CoherentData coherent_vector(const QuantumSpace& space, const SpherePoint& x, Gauge gauge) {
  const Vec3 pole(0.0, 0.0, gauge == Gauge::North ? -1.0 : 1.0);
  require(geodesic_distance(x.vec(), pole) > 1e-9, ErrorKind::PoleGauge,
          "coherent vector requested at the gauge-singular pole");
  CoherentData d;
  d.kernel_vector = space.basis_eval(x.vec(), gauge).conjugate();
  d.rawnsley = d.kernel_vector.squaredNorm();
  return d;
}

Vector coherent_state(const QuantumSpace& space, const Vec3& x) {
  Vector v = space.basis_eval(x, x[2] >= 0.0 ? Gauge::North : Gauge::South).conjugate();
  return v / v.norm();
}

double kernel_overlap(const QuantumSpace& space, const SpherePoint& x, const SpherePoint& y) {
  const Vector ex = space.basis_eval(x.vec(), x[2] >= 0.0 ? Gauge::North : Gauge::South);
  const Vector ey = space.basis_eval(y.vec(), y[2] >= 0.0 ? Gauge::North : Gauge::South);
  return std::abs(ex.dot(ey));
}

namespace {

// T_mn = sum_j W_j r_j(m) r_j(n) F_j(m - n), F_j the longitude DFT of the symbol.
template <bool Real>
Matrix assemble(const QuantumSpace& space, const void* data) {
  const QuadratureRule& rule = space.quadrature();
  const int nt = rule.n_theta(), np = rule.n_phi, k = space.k(), dim = space.dim();
  require(rule.size() == static_cast<std::size_t>(nt) * np, ErrorKind::InvalidArgument,
          "quadrature rule lacks a product layout");
  const Eigen::MatrixXd& rad = space.radial_table();

  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(np));
  double* rin = Real ? fftw_alloc_real(static_cast<std::size_t>(np)) : nullptr;
  fftw_complex* cin = Real ? nullptr : fftw_alloc_complex(static_cast<std::size_t>(np));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = Real ? fftw_plan_dft_r2c_1d(np, rin, out, FFTW_ESTIMATE)
                : fftw_plan_dft_1d(np, cin, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(dim, dim), im = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd re_up, im_up;
  if (!Real) {
    re_up = Eigen::MatrixXd::Zero(dim, dim);
    im_up = Eigen::MatrixXd::Zero(dim, dim);
  }
  std::vector<double> fr(static_cast<std::size_t>(k + 1)), fi(static_cast<std::size_t>(k + 1));
  std::vector<double> gr(static_cast<std::size_t>(k + 1)), gi(static_cast<std::size_t>(k + 1));
  const double dphi = 2.0 * kPi / np;

  for (int j = 0; j < nt; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * np;
    if constexpr (Real) {
      const double* v = static_cast<const double*>(data) + off;
      for (int l = 0; l < np; ++l) rin[l] = v[l];
    } else {
      const cplx* v = static_cast<const cplx*>(data) + off;
      for (int l = 0; l < np; ++l) {
        cin[l][0] = v[l].real();
        cin[l][1] = v[l].imag();
      }
    }
    fftw_execute(plan);
    const double w = 0.5 * rule.gl_weights[static_cast<std::size_t>(j)] * dphi;
    for (int d = 0; d <= k; ++d) {
      fr[static_cast<std::size_t>(d)] = w * out[d][0];
      fi[static_cast<std::size_t>(d)] = w * out[d][1];
      if constexpr (!Real) {
        const int idx = d == 0 ? 0 : np - d;
        gr[static_cast<std::size_t>(d)] = w * out[idx][0];
        gi[static_cast<std::size_t>(d)] = w * out[idx][1];
      }
    }
    const double* r = nullptr;
    Eigen::VectorXd rj = rad.row(j).transpose();
    r = rj.data();
    for (int n = 0; n <= k; ++n) {
      const double rn = r[n];
      if (rn == 0.0) continue;
      double* cr = re.col(n).data();
      double* ci = im.col(n).data();
      for (int m = n; m <= k; ++m) {
        const double a = rn * r[m];
        cr[m] += a * fr[static_cast<std::size_t>(m - n)];
        ci[m] += a * fi[static_cast<std::size_t>(m - n)];
      }
      if constexpr (!Real) {
        // Entries (n, m) above the diagonal use frequency n - m = -(m - n).
        double* ur = re_up.col(n).data();
        double* ui = im_up.col(n).data();
        for (int m = n + 1; m <= k; ++m) {
          const double a = rn * r[m];
          ur[m] += a * gr[static_cast<std::size_t>(m - n)];
          ui[m] += a * gi[static_cast<std::size_t>(m - n)];
        }
      }
    }
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  if (rin) fftw_free(rin);
  if (cin) fftw_free(cin);

  Matrix t(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m) {
      t(m, n) = cplx(re(m, n), im(m, n));
      if (m == n) continue;
      if constexpr (Real)
        t(n, m) = std::conj(t(m, n));
      else
        t(n, m) = cplx(re_up(m, n), im_up(m, n));
    }
  if constexpr (Real) {
    for (int m = 0; m < dim; ++m) t(m, m) = cplx(t(m, m).real(), 0.0);
  }
  return t;
}

}  // namespace

Matrix toeplitz_from_values(const QuantumSpace& space, std::span<const double> values) {
  require(values.size() == space.quadrature().size(), ErrorKind::DimensionMismatch,
          "symbol sample count does not match the quadrature");
  return assemble<true>(space, values.data());
}

Matrix toeplitz_from_values(const QuantumSpace& space, std::span<const cplx> values) {
  require(values.size() == space.quadrature().size(), ErrorKind::DimensionMismatch,
          "symbol sample count does not match the quadrature");
  return assemble<false>(space, values.data());
}

Matrix toeplitz(const QuantumSpace& space, const Observable& f, double t) {
  const QuadratureRule& rule = space.quadrature();
  std::vector<double> v(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) v[i] = f(rule.nodes[i], t);
  return toeplitz_from_values(space, std::span<const double>(v));
}

DensityOperator quantize_classical_state(const QuantumSpace& space, const ClassicalState& tau) {
  if (const auto* g = std::get_if<GridDensity>(&tau.data())) {
    if (g->rule->same_layout(space.quadrature())) {
      std::vector<double> v(g->values.size());
      const double r = space.rawnsley();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = g->values[i] / r;
      Matrix m = toeplitz_from_values(space, std::span<const double>(v));
      m /= m.trace().real();
      return DensityOperator(hermitian_part(m));
    }
  }
  std::vector<std::pair<Vec3, double>> atoms;
  if (const auto* a = std::get_if<Atoms>(&tau.data())) {
    for (std::size_t i = 0; i < a->points.size(); ++i)
      if (a->probabilities[i] > 0.0) atoms.emplace_back(a->points[i].vec(), a->probabilities[i]);
  } else {
    const auto& g = std::get<GridDensity>(tau.data());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double m = g.rule->weights[i] * g.values[i];
      if (m > 0.0) atoms.emplace_back(g.rule->nodes[i], m);
    }
  }
  Matrix a(space.dim(), static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i)
    a.col(static_cast<Eigen::Index>(i)) = std::sqrt(atoms[i].second) * coherent_state(space, atoms[i].first);
  Matrix m = a * a.adjoint();
  m /= m.trace().real();
  return DensityOperator(hermitian_part(m));
}

double berezin_transform(const QuantumSpace& space, const Matrix& tf, const SpherePoint& x) {
  const Vector xi = coherent_state(space, x.vec());
  return xi.dot(tf * xi).real();
}

double berezin_transform(const QuantumSpace& space, const Observable& f, const SpherePoint& x) {
  return berezin_transform(space, toeplitz(space, f), x);
}

double husimi_pairing(const Matrix& tf, const DensityOperator& theta) {
  require(tf.rows() == theta.dim(), ErrorKind::DimensionMismatch, "husimi pairing dimension mismatch");
  // tr(T theta) without forming the product.
  return (tf.transpose().cwiseProduct(theta.matrix())).sum().real();
}

double husimi_pairing(const QuantumSpace& space, const DensityOperator& theta, const Observable& f) {
  return husimi_pairing(toeplitz(space, f), theta);
}

}  // namespace qsl

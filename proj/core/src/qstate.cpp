#include "qsl/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qsl/error.hpp"

namespace qsl {

DensityOperator::DensityOperator(Matrix m) : m_(std::move(m)), cache_(std::make_shared<Cache>()) {
  require(m_.rows() == m_.cols() && m_.rows() > 0, ErrorKind::InvalidState, "density operator must be square");
  require(max_hermitian_deviation(m_) <= 1e-12, ErrorKind::InvalidState, "density operator is not Hermitian");
  require(std::abs(m_.trace() - cplx(1.0, 0.0)) <= 1e-9, ErrorKind::InvalidState,
          "density operator trace differs from 1");
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  const double n = psi.norm();
  require(n > 0.0, ErrorKind::InvalidState, "pure state from zero vector");
  const Vector u = psi / n;
  Matrix m = u * u.adjoint();
  return DensityOperator(hermitian_part(m));
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  require(dim > 0, ErrorKind::InvalidState, "dimension must be positive");
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

const HermitianEig& DensityOperator::eig() const {
  std::call_once(cache_->eig_once, [this] {
    if (cache_->eig.values.size() == 0) cache_->eig = eig_hermitian(m_);
  });
  require(cache_->eig.values[0] >= -1e-10, ErrorKind::InvalidState, "density operator is not positive");
  return cache_->eig;
}

Matrix psd_sqrt(const HermitianEig& e) {
  const double top = std::max(0.0, e.values[e.values.size() - 1]);
  // Eigenvalues at the level of round-off carry no information; their square
  // roots would dominate the fidelity floor.
  const double floor = top * std::numeric_limits<double>::epsilon() * static_cast<double>(e.values.size());
  return apply_spectral(e, [floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
}

const Matrix& DensityOperator::sqrt() const {
  const HermitianEig& e = eig();
  std::call_once(cache_->sqrt_once, [&] { cache_->sqrt = psd_sqrt(e); });
  return cache_->sqrt;
}

DensityOperator DensityOperator::conjugated(const Matrix& u) const {
  require(u.rows() == m_.rows() && u.cols() == m_.cols(), ErrorKind::DimensionMismatch,
          "conjugation dimension mismatch");
  const HermitianEig& e = eig();
  auto cache = std::make_shared<Cache>();
  cache->eig.values = e.values;
  cache->eig.vectors = u * e.vectors;
  Matrix m = cache->eig.vectors * e.values.cast<cplx>().asDiagonal() * cache->eig.vectors.adjoint();
  m = hermitian_part(m);
  const cplx tr = m.trace();
  m /= tr.real();
  return DensityOperator(std::move(m), std::move(cache));
}

double fidelity_from_roots(const Matrix& sqrt_theta, const Matrix& sqrt_sigma) {
  const RealVector s = singular_values(sqrt_theta * sqrt_sigma);
  return s.sum();
}

double fidelity(const DensityOperator& theta, const DensityOperator& sigma) {
  require(theta.dim() == sigma.dim(), ErrorKind::DimensionMismatch, "fidelity of states with different dims");
  return fidelity_from_roots(theta.sqrt(), sigma.sqrt());
}

Schatten schatten(const Matrix& a) {
  Schatten s;
  if (a.size() == 0) return s;
  const RealVector sv = singular_values(a);
  s.op_norm = sv[0];
  s.trace_norm = sv.sum();
  s.hilbert_schmidt = sv.norm();
  return s;
}

double gamma_q(const Matrix& theta, const Matrix& sigma) {
  require(theta.rows() == sigma.rows(), ErrorKind::DimensionMismatch, "gamma_q dimension mismatch");
  const double nt = op_norm_hermitian(theta), ns = op_norm_hermitian(sigma);
  require(nt > 0.0 && ns > 0.0, ErrorKind::UndefinedOverlap, "gamma_q of a zero operator");
  return op_norm(theta * sigma) / (nt * ns);
}

double gamma_q(const DensityOperator& theta, const DensityOperator& sigma) {
  const auto& et = theta.eig();
  const auto& es = sigma.eig();
  const double nt = et.values[et.values.size() - 1], ns = es.values[es.values.size() - 1];
  require(nt > 0.0 && ns > 0.0, ErrorKind::UndefinedOverlap, "gamma_q of a zero operator");
  return op_norm(theta.matrix() * sigma.matrix()) / (nt * ns);
}

double gamma_cl(const Observable& g, const Observable& h, const ProbeGrid& grid) {
  const double ng = uniform_norm(g, grid), nh = uniform_norm(h, grid);
  require(ng > 0.0 && nh > 0.0, ErrorKind::ZeroFunction, "gamma_cl of a vanishing function");
  return std::min(1.0, uniform_norm(g * h, grid) / (ng * nh));
}

double gamma_cl(const Observable& g, const Observable& h) { return gamma_cl(g, h, default_probe_grid()); }

MicroProbe microsupport_probe(const std::vector<StateAtScale>& family, const Observable& region,
                              double threshold) {
  std::set<double> hbars;
  for (const auto& s : family) hbars.insert(s.space->hbar());
  require(hbars.size() >= 4, ErrorKind::InsufficientSamples, "microsupport probe needs 4 distinct hbar values");
  require(*hbars.rbegin() / *hbars.begin() >= 10.0 - 1e-12, ErrorKind::InsufficientSamples,
          "microsupport probe needs hbar to span a decade");
  MicroProbe p;
  p.region_id = region.name();
  for (const auto& s : family) {
    require(s.space->dim() == s.state.dim(), ErrorKind::DimensionMismatch, "state does not match its space");
    p.masses.emplace_back(s.space->hbar(), husimi_pairing(*s.space, s.state, region));
  }
  std::sort(p.masses.begin(), p.masses.end());
  p.fit = fit_decay_order(p.masses, threshold);
  p.rapid_decay = p.fit.slope >= threshold;
  return p;
}

}  // namespace qsl

#include "qsl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

namespace qsl {

HermitianEig eig_hermitian(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigenvalues_hermitian(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Matrix apply_spectral(const HermitianEig& e, const std::function<double(double)>& fn) {
  RealVector d(e.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = fn(e.values[i]);
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

Matrix unitary_exp(const HermitianEig& e, double tau) {
  Vector d(e.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::polar(1.0, -tau * e.values[i]);
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double max_hermitian_deviation(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double op_norm_hermitian(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  RealVector ev = eigenvalues_hermitian(hermitian_part(a));
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

RealVector singular_values(const Matrix& a) {
  if (a.rows() <= 16) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)[0];
}

}  // namespace qsl

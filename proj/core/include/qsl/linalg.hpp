#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace qsl {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;
};

HermitianEig eig_hermitian(const Matrix& a);
RealVector eigenvalues_hermitian(const Matrix& a);

// V f(Λ) V* for a real function applied to the spectrum.
Matrix apply_spectral(const HermitianEig& e, const std::function<double(double)>& fn);
// V exp(-i tau Λ) V*.
Matrix unitary_exp(const HermitianEig& e, double tau);

Matrix hermitian_part(const Matrix& a);
double max_hermitian_deviation(const Matrix& a);

double op_norm_hermitian(const Matrix& a);
double op_norm(const Matrix& a);
RealVector singular_values(const Matrix& a);

}  // namespace qsl

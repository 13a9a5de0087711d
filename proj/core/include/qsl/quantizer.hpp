#pragma once

// Berezin-Toeplitz quantization of the sphere at level k (hbar = 1/k).
//
// Orthonormal basis: psi_m = sqrt((k+1)/(2 pi) C(k,m)) cos^{k-m}(theta/2)
// sin^m(theta/2) e^{i m phi}, m = 0..k, which is the unitary-gauge form of
// the monomials z^m in the affine coordinate z = tan(theta/2) e^{i phi}. The
// default gauge is singular at the south pole; the south gauge multiplies by
// e^{-i k phi} and is singular at the north pole.

#include <memory>
#include <span>
#include <vector>

#include "qsl/density.hpp"
#include "qsl/linalg.hpp"
#include "qsl/phase_space.hpp"

namespace qsl {

enum class Gauge { North, South };

inline constexpr int kDefaultMaxLevel = 1024;

class QuantumSpace {
 public:
  static std::shared_ptr<const QuantumSpace> build(int k, double oversample = 1.5,
                                                   int max_level = kDefaultMaxLevel);

  int k() const { return k_; }
  int dim() const { return k_ + 1; }
  double hbar() const { return 1.0 / k_; }
  double rawnsley() const { return (k_ + 1) / (2.0 * kPi); }

  const QuadratureRule& quadrature() const { return *rule_; }
  std::shared_ptr<const QuadratureRule> quadrature_ptr() const { return rule_; }

  // Values psi_m(x), m = 0..k.
  Vector basis_eval(const Vec3& x, Gauge gauge = Gauge::North) const;
  // r_j(m) = |psi_m| on the j-th latitude of the quadrature.
  const Eigen::MatrixXd& radial_table() const { return radial_; }

 private:
  QuantumSpace() = default;
  int k_ = 0;
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<double> log_norm_;
  Eigen::MatrixXd radial_;
};

struct CoherentData {
  Vector kernel_vector;  // e_x, with <s, e_x> = s(x)
  double rawnsley = 0.0;

  Vector normalized() const { return kernel_vector / std::sqrt(rawnsley); }
  Matrix projector() const { return kernel_vector * kernel_vector.adjoint() / rawnsley; }
};

// Throws PoleGauge within 1e-9 of the gauge's singular pole.
CoherentData coherent_vector(const QuantumSpace& space, const SpherePoint& x, Gauge gauge = Gauge::North);
// Normalized coherent vector in whichever gauge is regular at x.
Vector coherent_state(const QuantumSpace& space, const Vec3& x);

double kernel_overlap(const QuantumSpace& space, const SpherePoint& x, const SpherePoint& y);

Matrix toeplitz(const QuantumSpace& space, const Observable& f, double t = 0.0);
// Assembles from values of the symbol at the space's quadrature nodes.
Matrix toeplitz_from_values(const QuantumSpace& space, std::span<const double> values);
Matrix toeplitz_from_values(const QuantumSpace& space, std::span<const cplx> values);

DensityOperator quantize_classical_state(const QuantumSpace& space, const ClassicalState& tau);

double berezin_transform(const QuantumSpace& space, const Observable& f, const SpherePoint& x);
double berezin_transform(const QuantumSpace& space, const Matrix& tf, const SpherePoint& x);

double husimi_pairing(const QuantumSpace& space, const DensityOperator& theta, const Observable& f);
double husimi_pairing(const Matrix& tf, const DensityOperator& theta);

}  // namespace qsl

#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/quantizer.hpp"

using namespace qsl;
namespace ob = qsl::observables;

TEST_CASE("T(1) is the identity and the Rawnsley function is constant") {
  for (int k : {2, 16, 64}) {
    const auto sp = QuantumSpace::build(k);
    CHECK((toeplitz(*sp, ob::constant(1.0)) - Matrix::Identity(k + 1, k + 1)).norm() < 1e-12);
    for (const Vec3& x : ProbeGrid::fibonacci(50).points) {
      const Vector e = sp->basis_eval(x, x[2] >= 0 ? Gauge::North : Gauge::South);
      CHECK(e.squaredNorm() == doctest::Approx((k + 1) / (2.0 * kPi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("T(x3) is diagonal with spectrum (2m - k)/(k + 2)") {
  const int k = 10;
  const auto sp = QuantumSpace::build(k);
  const Matrix t = toeplitz(*sp, ob::coordinate(2));
  CHECK((t - Matrix(t.diagonal().asDiagonal())).norm() < 1e-12);
  const RealVector ev = eigenvalues_hermitian(t);
  for (int m = 0; m <= k; ++m) CHECK(ev[m] == doctest::Approx((2.0 * m - k) / (k + 2)).epsilon(1e-12));
}

TEST_CASE("Berezin transform of a linear function is k/(k+2) times it") {
  const int k = 12;
  const auto sp = QuantumSpace::build(k);
  const Observable f = ob::coordinate(0) + 0.5 * ob::coordinate(1) - ob::coordinate(2);
  for (const Vec3& x : ProbeGrid::fibonacci(20).points)
    CHECK(berezin_transform(*sp, f, SpherePoint(x)) == doctest::Approx(k / (k + 2.0) * f(x)).epsilon(1e-10));
}

TEST_CASE("coherent overlap is R cos^k(d/2)") {
  const int k = 20;
  const auto sp = QuantumSpace::build(k);
  const SpherePoint x = SpherePoint::from_angles(0.7, 0.3), y = SpherePoint::from_angles(2.2, -1.4);
  const double d = geodesic_distance(x.vec(), y.vec());
  CHECK(kernel_overlap(*sp, x, y) == doctest::Approx(sp->rawnsley() * std::pow(std::cos(d / 2), k)).epsilon(1e-10));
  const Vector cx = coherent_state(*sp, x.vec());
  CHECK(cx.norm() == doctest::Approx(1.0));
}

TEST_CASE("level outside capacity is rejected") {
  CHECK_THROWS_AS(QuantumSpace::build(1), Error);
  CHECK_THROWS_AS(QuantumSpace::build(4096), Error);
}

TEST_CASE("pole gauge is rejected") {
  const auto sp = QuantumSpace::build(8);
  CHECK_THROWS_AS(coherent_vector(*sp, SpherePoint(Vec3(0, 0, -1)), Gauge::North), Error);
  CHECK_NOTHROW(coherent_vector(*sp, SpherePoint(Vec3(0, 0, -1)), Gauge::South));
}

TEST_CASE("Toeplitz operators of nonnegative symbols are positive") {
  const auto sp = QuantumSpace::build(24);
  const Observable f = ob::cap_bump(Vec3(1, 0, 0), 0.2, 0.9);
  CHECK(eigenvalues_hermitian(toeplitz(*sp, f)).minCoeff() > -1e-12);
}

TEST_CASE("Husimi pairing of a coherent state is the Berezin transform") {
  const auto sp = QuantumSpace::build(16);
  const Vec3 x = SpherePoint::from_angles(1.0, 0.5).vec();
  const Observable f = ob::coordinate(0) * ob::coordinate(0);
  const DensityOperator p = DensityOperator::pure(coherent_state(*sp, x));
  CHECK(husimi_pairing(*sp, p, f) == doctest::Approx(berezin_transform(*sp, f, SpherePoint(x))).epsilon(1e-10));
}

TEST_CASE("quantized classical state has unit trace") {
  const auto sp = QuantumSpace::build(16);
  const DensityOperator th = quantize_classical_state(
      *sp, ClassicalState::from_density(sp->quadrature_ptr(), ob::cap_bump(Vec3(0, 1, 0), 0.3, 1.0)));
  CHECK(th.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(th.eig().values.minCoeff() > -1e-12);
}

#include <cmath>

#include "doctest.h"
#include "qsl/dynamics.hpp"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/qstate.hpp"

using namespace qsl;
namespace ob = qsl::observables;

TEST_CASE("constant Hamiltonian propagates by the exact exponential") {
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const double hbar = 0.25;
  const Propagator p = propagate(QuantumHamiltonianPath::constant(sx, hbar), 0.0, 1.0, 4);
  // U = exp(-i F / hbar).
  const double a = 1.0 / hbar;
  CHECK(std::abs(p.unitary(0, 0) - std::cos(a)) < 1e-12);
  CHECK(std::abs(std::abs(p.unitary(0, 1)) - std::abs(std::sin(a))) < 1e-12);
}

TEST_CASE("speed limit equality for a half flip") {
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const double hbar = 0.1;
  Vector e0 = Vector::Zero(2);
  e0[0] = 1.0;
  const UhlmannResult u =
      uhlmann_bound(QuantumHamiltonianPath::constant(0.5 * kPi * hbar * sx, hbar), DensityOperator::pure(e0), 1);
  CHECK(u.fidelity_a == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(u.ell_q == doctest::Approx(0.5 * kPi * hbar));
  CHECK(u.arccos_term == doctest::Approx(0.5 * kPi * hbar));
}

TEST_CASE("quantum energy of T(x3) is its operator norm") {
  const auto sp = QuantumSpace::build(6);
  CHECK(quantum_energy(QuantumHamiltonianPath::toeplitz_path(sp, ob::coordinate(2)), 16) == doctest::Approx(0.75));
}

TEST_CASE("rotation of a coherent state stays coherent") {
  const auto sp = QuantumSpace::build(32);
  const Vec3 x = SpherePoint::from_angles(kPi / 2, 0.0).vec();
  const Observable f = ob::longitude_rotation(kPi / 2);
  const DislocationReport r = run_dislocation(sp, DensityOperator::pure(coherent_state(*sp, x)), f, 64);
  const Vec3 y = f.exact_flow()(x, 0.0, 1.0);
  // T(x3) has level spacing 2/(k+2), so the quantum rotation angle is k/(k+2)
  // of the classical one, and |<xi_x, xi_y>| = cos^k(d/2).
  const double d = geodesic_distance(x, y) * 32.0 / 34.0;
  CHECK(r.fidelity_a == doctest::Approx(std::pow(std::cos(d / 2), 32)).epsilon(1e-6));
  CHECK(r.slacks.at("qsl") >= -1e-9);
}

TEST_CASE("semiclassical constants are finite for the theorem battery") {
  const QuantizationConstants K{2.0, 2.0, 0.5};
  const SemiclassicalConstants sc = semiclassical_constants(ob::cap_bump(Vec3(1, 0, 0), 0.0, 1.0),
                                                           ob::longitude_rotation(kPi), K);
  CHECK(std::isfinite(sc.b));
  CHECK(sc.b > 0.0);
  CHECK(sc.c >= 0.0);
}

#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/lagrangian.hpp"

using namespace qsl;

TEST_CASE("latitude circle arithmetic") {
  const LatitudeCircle c = LatitudeCircle::make(Rational::make(1, 3));
  CHECK(c.k0 == 3);
  CHECK(c.ell0() == 1);
  CHECK(c.ell1() == 2);
  CHECK(c.cos_theta() == doctest::Approx(-1.0 / 3));
  CHECK_THROWS_AS(Rational::make(1, 0), Error);
}

TEST_CASE("circle integrals") {
  CHECK(circle_integral([](double t) { return std::cos(t) * std::cos(t); }) == doctest::Approx(kPi));
  CHECK(std::abs(circle_integral_complex([](double t) { return std::exp(cplx(0, 3 * t)); })) < 1e-12);
}

TEST_CASE("dislocator profile has vanishing mean phase") {
  const Dislocator d = dislocator_profile(1e-12);
  CHECK(std::abs(circle_integral_complex([&](double t) { return std::exp(cplx(0, d.f0(t))); })) < 1e-9);
  CHECK(d.f0.parity() == Parity::Odd);
  CHECK(d.bracket_lo * d.bracket_hi <= 0.0);
}

TEST_CASE("correction profile hits its target") {
  const Dislocator d = dislocator_profile(1e-12);
  const cplx z(0.3, -0.2);
  const ProfileFunction g = correction_profile(z, d.s_star);
  const cplx got = circle_integral_complex([&](double t) { return std::exp(cplx(0, d.f0(t))) * g(t); });
  CHECK(std::abs(got - z) < 1e-8);
}

TEST_CASE("Lagrangian state is a unit basis vector") {
  const auto sp = QuantumSpace::build(8);
  const Vector psi = lagrangian_state(*sp, LatitudeCircle::make(Rational::make(1, 2)));
  CHECK(psi.norm() == doctest::Approx(1.0));
  CHECK(std::abs(psi[4]) == doctest::Approx(1.0));
}

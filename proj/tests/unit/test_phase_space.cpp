#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/phase_space.hpp"
#include "qsl/plateau.hpp"

using namespace qsl;
namespace ob = qsl::observables;

TEST_CASE("quadrature integrates polynomials exactly") {
  const auto rule = fine_rule();
  CHECK(integrate(*rule, ob::constant(1.0)) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(integrate(*rule, ob::coordinate(2) * ob::coordinate(2)) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(std::abs(integrate(*rule, ob::coordinate(0) * ob::coordinate(1))) < 1e-13);
  const Observable x1 = ob::coordinate(0);
  CHECK(integrate(*rule, x1 * x1 * x1 * x1) == doctest::Approx(2.0 * kPi / 5.0).epsilon(1e-12));
}

TEST_CASE("geodesic distance and exponential map") {
  const Vec3 n(0, 0, 1), e(1, 0, 0);
  CHECK(geodesic_distance(n, e) == doctest::Approx(kPi / 2));
  CHECK(geodesic_distance(n, -n) == doctest::Approx(kPi));
  const Vec3 y = exp_map(n, Vec3(0.3, 0, 0));
  CHECK(geodesic_distance(n, y) == doctest::Approx(0.3));
}

TEST_CASE("Poisson bracket of the coordinates") {
  const SpherePoint x = SpherePoint::from_angles(0.7, 0.3);
  const Vec3 v = x.vec();
  CHECK(poisson_bracket(ob::coordinate(0), ob::coordinate(1), x) == doctest::Approx(-2.0 * v[2]));
  CHECK(poisson_bracket(ob::coordinate(1), ob::coordinate(2), x) == doctest::Approx(-2.0 * v[0]));
  CHECK(poisson_bracket(ob::coordinate(2), ob::coordinate(0), x) == doctest::Approx(-2.0 * v[1]));
  const Observable f = ob::coordinate(0) * ob::coordinate(2);
  CHECK(poisson_bracket(f, f, x) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("numerical flow matches the exact rotation flow") {
  const Observable f = ob::rotation_generator(Vec3(1, 1, 1).normalized(), 1.3);
  const Vec3 x = SpherePoint::from_angles(1.1, 0.4).vec();
  const Vec3 y = rk4_flow(f, x, 0.0, 1.0, 256);
  const Vec3 exact = f.exact_flow()(x, 0.0, 1.0);
  CHECK(geodesic_distance(y, exact) < 1e-10);
  CHECK(geodesic_distance(exact, x) > 0.1);
}

TEST_CASE("axial flow rotates by -2 h'(a.x) t") {
  const Observable f = ob::height();
  const Vec3 x = SpherePoint::from_angles(1.0, 0.0).vec();
  const Vec3 y = f.exact_flow()(x, 0.0, 0.5);
  CHECK(std::atan2(y[1], y[0]) == doctest::Approx(-1.0));
  CHECK(y[2] == doctest::Approx(x[2]));
}

TEST_CASE("rotation displaces a cap and not a full band") {
  std::vector<SpherePoint> cap, band;
  for (const Vec3& x : ProbeGrid::fibonacci(2000).points) {
    if (geodesic_distance(x, Vec3(1, 0, 0)) < 0.5) cap.emplace_back(x);
    if (std::abs(x[2]) < 0.2) band.emplace_back(x);
  }
  const Observable half_turn = ob::longitude_rotation(kPi);
  // The margin must exceed the sample spacing to detect overlap.
  CHECK(displacement_check(half_turn, cap, 0.1).displaced);
  CHECK_FALSE(displacement_check(half_turn, band, 0.1).displaced);
}

TEST_CASE("equal-area chart") {
  const EquatorialChart chart(0.0, 0.99);
  for (const Vec2 X : {Vec2(0.1, 0.2), Vec2(-0.5, 0.3), Vec2(0.0, -0.9)}) {
    const Vec2 back = chart.to_chart(chart.from_chart(X));
    CHECK((back - X).norm() < 1e-12);
  }
  CHECK(geodesic_distance(chart.from_chart(Vec2(0.6, 0.0)), chart.center().vec()) ==
        doctest::Approx(chart_geodesic_radius(0.6)));
  CHECK(chart_geodesic_radius(1.0) == doctest::Approx(kPi / 2));
  // Area of the disk |X| < r is pi r^2.
  const double r = 0.7;
  const Observable disk = Observable::autonomous(
      "disk", [&](const Vec3& x) { return geodesic_distance(x, chart.center().vec()) < chart_geodesic_radius(r); });
  CHECK(integrate(QuadratureRule::product(800, 1600), disk) == doctest::Approx(kPi * r * r).epsilon(2e-3));
}

TEST_CASE("plateau") {
  const Plateau p(-1.0, 1.0, -0.5, 0.5);
  CHECK(p(0.0) == 1.0);
  CHECK(p(-0.5) == 1.0);
  CHECK(p(1.0) == 0.0);
  CHECK(p(-2.0) == 0.0);
  CHECK(p(0.75) > 0.0);
  CHECK(p(0.75) < 1.0);
  CHECK(p.derivative(0.75) < 0.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("uniform norm and Hofer length") {
  CHECK(uniform_norm(ob::coordinate(2)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hofer_length(ob::height()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hofer_length(2.0 * ob::coordinate(0) + ob::constant(1.0)) == doctest::Approx(3.0).epsilon(1e-6));
}

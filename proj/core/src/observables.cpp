#include "qsl/observables.hpp"

#include <cmath>

#include "qsl/error.hpp"

namespace qsl::observables {

Vec3 rotate(const Vec3& x, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return x * c + axis.cross(x) * s + axis * axis.dot(x) * (1.0 - c);
}

Observable constant(double c) {
  return Observable::autonomous(
             "const(" + std::to_string(c) + ")", [c](const Vec3&) { return c; },
             [](const Vec3&) { return Vec3::Zero().eval(); })
      .with_exact_flow([](const Vec3& x, double, double) { return x; });
}

Observable axial(std::string name, const Vec3& axis, std::function<double(double)> h,
                 std::function<double(double)> dh) {
  const Vec3 a = axis.normalized();
  return Observable::autonomous(
             std::move(name), [a, h](const Vec3& x) { return h(a.dot(x)); },
             [a, dh](const Vec3& x) { return (dh(a.dot(x)) * a).eval(); })
      .with_exact_flow([a, dh](const Vec3& x, double t0, double t1) {
        return rotate(x, a, -2.0 * dh(a.dot(x)) * (t1 - t0));
      });
}

Observable coordinate(int i) {
  require(i >= 0 && i < 3, ErrorKind::InvalidArgument, "coordinate index out of range");
  Vec3 e = Vec3::Zero();
  e[i] = 1.0;
  return axial("x" + std::to_string(i + 1), e, [](double u) { return u; }, [](double) { return 1.0; });
}

Observable height() { return coordinate(2); }

Observable rotation_generator(const Vec3& axis, double angle) {
  return axial(
      "rot(" + std::to_string(angle) + ")", axis, [angle](double u) { return 0.5 * angle * u; },
      [angle](double) { return 0.5 * angle; });
}

Observable longitude_rotation(double angle) { return rotation_generator(Vec3(0, 0, 1), angle); }

Observable cap_bump(const Vec3& center, double inner, double outer) {
  const Vec3 c = center.normalized();
  const Plateau p(-outer, outer, -inner, inner);
  return Observable::autonomous(
             "bump", [c, p](const Vec3& x) { return p(geodesic_distance(c, x)); },
             [c, p](const Vec3& x) {
               const double d = geodesic_distance(c, x);
               const double dp = p.derivative(d);
               if (dp == 0.0) return Vec3::Zero().eval();
               const Vec3 tang = c - c.dot(x) * x;
               return (-dp * tang / std::sin(d)).eval();
             })
      .with_support(Cap{c, outer});
}

Observable chart_translation(const EquatorialChart& chart, double inner, double outer) {
  require(outer < chart.radius(), ErrorKind::ChartOverflow, "translation cutoff exceeds chart");
  const Plateau p(-outer, outer, -inner, inner);
  return Observable::autonomous("translate", [chart, p](const Vec3& x) {
           const Vec2 X = chart.to_chart(x);
           return 0.5 * X[0] * p(X.norm());
         })
      .with_support(Cap{chart.center().vec(), chart_geodesic_radius(outer)});
}

Observable chart_rotation(const EquatorialChart& chart, double angle, double inner, double outer) {
  require(outer < chart.radius(), ErrorKind::ChartOverflow, "rotation cutoff exceeds chart");
  const Plateau p(-outer, outer, -inner, inner);
  // |X|^2 = 1 - c.x, so the generator is axial about the chart center.
  auto h = [angle, p](double u) {
    const double r2 = std::max(0.0, 1.0 - u);
    return 0.5 * angle * r2 * p(std::sqrt(r2));
  };
  auto dh = [angle, p](double u) {
    const double r2 = std::max(0.0, 1.0 - u);
    const double r = std::sqrt(r2);
    const double dp = r > 0.0 ? p.derivative(r) * (-0.5 / r) : 0.0;
    return 0.5 * angle * (-p(r) + r2 * dp);
  };
  return axial("chart-rot(" + std::to_string(angle) + ")", chart.center().vec(), h, dh)
      .with_support(Cap{chart.center().vec(), chart_geodesic_radius(outer)});
}

Observable chart_bump(const EquatorialChart& chart, const Vec2& center, double inner, double outer) {
  require(center.norm() + outer < chart.radius(), ErrorKind::ChartOverflow, "bump exceeds chart");
  const Plateau p(-outer, outer, -inner, inner);
  const Vec3 c = chart.from_chart(center);
  return Observable::autonomous("chart-bump",
                                [chart, center, p](const Vec3& x) { return p((chart.to_chart(x) - center).norm()); })
      .with_support(Cap{c, chart_geodesic_radius(center.norm() + outer) + geodesic_distance(chart.center().vec(), c)});
}

}  // namespace qsl::observables

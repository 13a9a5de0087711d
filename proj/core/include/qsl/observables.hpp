#pragma once

// Named built-in observables, selectable from experiment configs.

#include <functional>
#include <string>

#include "qsl/phase_space.hpp"
#include "qsl/plateau.hpp"

namespace qsl::observables {

Observable constant(double c);
Observable coordinate(int i);
Observable height();

// f = h(axis . x). Its flow rotates each point about the axis by
// -2 h'(axis . x) t, which is carried as the exact flow.
Observable axial(std::string name, const Vec3& axis, std::function<double(double)> h,
                 std::function<double(double)> dh);

// Rotates the sphere about `axis` by `angle` (clockwise) in unit time.
Observable rotation_generator(const Vec3& axis, double angle);
// The polar-axis case.
Observable longitude_rotation(double angle);

// Plateau in geodesic distance: 1 within `inner`, 0 beyond `outer`.
Observable cap_bump(const Vec3& center, double inner, double outer);

// x1/2 in chart coordinates on the disk of radius `inner`, cut off to 0 beyond `outer`.
Observable chart_translation(const EquatorialChart& chart, double inner, double outer);

// (angle/2)|X|^2 on the chart disk of radius `inner`, cut off beyond `outer`.
// Rotates that disk about the chart center by `angle` in unit time.
Observable chart_rotation(const EquatorialChart& chart, double angle, double inner, double outer);

// Plateau in chart distance from `center`.
Observable chart_bump(const EquatorialChart& chart, const Vec2& center, double inner, double outer);

Vec3 rotate(const Vec3& x, const Vec3& axis, double angle);

}  // namespace qsl::observables

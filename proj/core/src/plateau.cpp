#include "qsl/plateau.hpp"

#include <cmath>

#include "qsl/error.hpp"

namespace qsl {

namespace {

double psi(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double dpsi(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double p = psi(u), q = psi(1.0 - u);
  return p / (p + q);
}

double smooth_step_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double p = psi(u), q = psi(1.0 - u);
  const double s = p + q;
  return (dpsi(u) * q + p * dpsi(1.0 - u)) / (s * s);
}

Plateau::Plateau(double a, double b, double inner_a, double inner_b)
    : a_(a), b_(b), ia_(inner_a), ib_(inner_b) {
  require(a < inner_a && inner_a <= inner_b && inner_b < b, ErrorKind::InvalidArgument,
          "plateau needs a < inner_a <= inner_b < b");
}

double Plateau::operator()(double t) const {
  if (t <= a_ || t >= b_) return 0.0;
  if (t >= ia_ && t <= ib_) return 1.0;
  if (t < ia_) return smooth_step((t - a_) / (ia_ - a_));
  return smooth_step((b_ - t) / (b_ - ib_));
}

double Plateau::derivative(double t) const {
  if (t <= a_ || t >= b_ || (t >= ia_ && t <= ib_)) return 0.0;
  if (t < ia_) return smooth_step_derivative((t - a_) / (ia_ - a_)) / (ia_ - a_);
  return -smooth_step_derivative((b_ - t) / (b_ - ib_)) / (b_ - ib_);
}

Plateau plateau(double a, double b, double inner_a, double inner_b) {
  return Plateau(a, b, inner_a, inner_b);
}

}  // namespace qsl

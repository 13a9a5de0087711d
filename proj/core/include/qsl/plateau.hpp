#pragma once

namespace qsl {

// Smooth step from 0 (u <= 0) to 1 (u >= 1) built from exp(-1/u).
double smooth_step(double u);
double smooth_step_derivative(double u);

// C-infinity bump: 1 on [inner_a, inner_b], 0 outside (a, b), monotone in between.
class Plateau {
 public:
  Plateau(double a, double b, double inner_a, double inner_b);

  double operator()(double t) const;
  double derivative(double t) const;

  double a() const { return a_; }
  double b() const { return b_; }
  double inner_a() const { return ia_; }
  double inner_b() const { return ib_; }

 private:
  double a_, b_, ia_, ib_;
};

Plateau plateau(double a, double b, double inner_a, double inner_b);

}  // namespace qsl

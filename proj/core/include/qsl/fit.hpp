#pragma once

#include <span>
#include <utility>
#include <vector>

namespace qsl {

inline constexpr double kNoiseFloor = 1e-14;

// Least-squares fit of log|value| against log x. Reported slope is the decay
// order in x, so for x = hbar a positive slope means decay as hbar -> 0.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double x_min = 0.0, x_max = 0.0;
  double threshold = 0.0;
  int clamped = 0;
  bool verdict = false;  // slope >= threshold and r2 >= 0.98
};

inline constexpr double kMinR2 = 0.98;

DecayFit fit_decay_order(std::span<const std::pair<double, double>> points, double threshold);

// Linear least squares y = a + b x.
struct LineFit {
  double intercept = 0.0, slope = 0.0, r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Nonnegative least squares min |A c - y| over c >= 0 (Lawson-Hanson).
std::vector<double> nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

}  // namespace qsl

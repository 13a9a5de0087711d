#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/fit.hpp"

using namespace qsl;

TEST_CASE("decay fit of a power law") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.1, 0.05, 0.02, 0.01}) pts.emplace_back(x, 3.0 * x * x);
  const DecayFit f = fit_decay_order(pts, 1.5);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.verdict);
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
}

TEST_CASE("constant values fail a positive threshold") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.1, 0.05, 0.02, 0.01}) pts.emplace_back(x, 0.5);
  const DecayFit f = fit_decay_order(pts, 1.0);
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(f.verdict);
}

TEST_CASE("values below the noise floor are clamped and flagged") {
  std::vector<std::pair<double, double>> pts = {{0.1, 1e-3}, {0.05, 1e-5}, {0.02, 1e-8}, {0.01, 0.0}, {0.005, 0.0}};
  const DecayFit f = fit_decay_order(pts, 4.0);
  CHECK(f.clamped == 2);
}

TEST_CASE("too few points") {
  std::vector<std::pair<double, double>> pts = {{0.1, 1.0}, {0.05, 0.5}, {0.02, 0.2}};
  CHECK_THROWS_AS(fit_decay_order(pts, 1.0), Error);
}

TEST_CASE("nonnegative least squares") {
  // y = 2 a + 0 b with b anticorrelated; the unconstrained solution has b < 0.
  const std::vector<std::vector<double>> cols = {{1, 2, 3, 4}, {4, 3, 2, 1}};
  const std::vector<double> y = {1, 3, 5, 7};
  const auto c = nnls(cols, y);
  CHECK(c[1] == 0.0);
  CHECK(c[0] > 0.0);
  const std::vector<double> y2 = {6, 7, 8, 9};
  const auto c2 = nnls(cols, y2);
  CHECK(c2[0] == doctest::Approx(2.0));
  CHECK(c2[1] == doctest::Approx(1.0));
}

TEST_CASE("line fit") {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}

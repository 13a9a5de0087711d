#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/smallscale.hpp"

using namespace qsl;
namespace ob = qsl::observables;

TEST_CASE("lattice Gaussian sum") {
  for (double a : {0.05, 0.5, 3.0}) {
    double direct = 0.0;
    for (int i = -60; i <= 60; ++i)
      for (int j = -60; j <= 60; ++j)
        if (i || j) direct += std::exp(-a * (i * i + j * j));
    CHECK(lattice_gaussian_sum(a) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("grid norm tends to the lattice sum as hbar/s^2 -> 0") {
  const EquatorialChart chart(0.0, 0.99);
  const double s = 0.3;
  const GridSpec spec = GridSpec::make(chart, s, ob::chart_bump(chart, Vec2(0, 0), 0.0, 0.6));
  double lattice = 0.0;
  for (const Vec2& X : spec.points) lattice += s * s * std::pow(spec.envelope(chart.from_chart(X)), 2);
  double prev = 1e300;
  for (int k : {32, 128, 512}) {
    const auto sp = QuantumSpace::build(k);
    const double n = grid_superposition(*sp, spec).norm;
    const double dev = std::abs(n * n - lattice);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("envelope outside the chart is rejected") {
  const EquatorialChart chart(0.0, 0.5);
  CHECK_THROWS_AS(GridSpec::make(chart, 0.2, ob::chart_bump(chart, Vec2(0, 0), 0.0, 0.9)), Error);
}

TEST_CASE("direct and matrix pairings agree") {
  const EquatorialChart chart(0.0, 0.99);
  const GridSpec spec = GridSpec::make(chart, 0.3, ob::chart_bump(chart, Vec2(0, 0), 0.0, 0.6));
  const auto sp = QuantumSpace::build(24);
  const GridState st = grid_superposition(*sp, spec);
  const Observable g = ob::constant(1.0) + ob::coordinate(1);
  const PairingCheck pc = grid_pairing_check(*sp, spec, g, &st);
  CHECK(grid_pairing_direct(*sp, spec, g, st) == doctest::Approx(pc.value).epsilon(1e-8));
}

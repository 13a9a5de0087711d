#pragma once

// Coherent-state grids on a chart lattice and dislocation at small scales.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/fit.hpp"
#include "qsl/phase_space.hpp"
#include "qsl/quantizer.hpp"

namespace qsl {

struct GridSpec {
  EquatorialChart chart;
  double s = 1.0;
  Observable envelope;      // normalized: integral of |phi|^2 dmu = 1
  std::vector<Vec2> points;  // s Z^2 inside the chart disk, anchored at the chart center

  // Normalizes `envelope` and lays out the lattice. Throws ChartOverflow if
  // the envelope does not vanish outside the chart.
  static GridSpec make(const EquatorialChart& chart, double s, const Observable& envelope);
};

struct GridState {
  Vector psi;  // s sum_x phi(x) xi_x, unnormalized
  double norm = 0.0;
  std::size_t active_points = 0;
};

GridState grid_superposition(const QuantumSpace& space, const GridSpec& spec);

struct PairingCheck {
  double value = 0.0;   // <T(g) Psi, Psi> / |Psi|^2
  double target = 0.0;  // integral of g |phi|^2 dmu
  double residual = 0.0;
};

PairingCheck grid_pairing_check(const QuantumSpace& space, const GridSpec& spec, const Observable& g,
                                const GridState* state = nullptr);

// The same pairing as the quadrature of g |Psi(x)|^2 with Psi(x) summed in
// closed form, so values far below round-off of the matrix form keep their
// relative precision.
double grid_pairing_direct(const QuantumSpace& space, const GridSpec& spec, const Observable& g,
                           const GridState& state);

struct TranslationResult {
  cplx overlap;  // <U(s) Psi, Psi> / |Psi|^2
  double overlap_abs = 0.0;
  double ell_q = 0.0;
};

// Propagates the grid state for time s under T(f). The flow of f must keep
// the envelope support inside the region where f is the exact translation
// x1/2, i.e. inside the disk of radius `translation_inner`.
TranslationResult translation_dislocation(const std::shared_ptr<const QuantumSpace>& space, const GridSpec& spec,
                                          const Observable& f, double translation_inner);

// Sum over x in s(Z^2 \ {0}) of exp(-lambda |x|^2), as a function of a = s^2 lambda.
double lattice_gaussian_sum(double a);

struct RescaledRow {
  int k = 0;
  double hbar = 0.0;
  double s = 0.0;
  double s2inv_hbar = 0.0;
  double fidelity = 1.0;
  double ell_q = 0.0;
  double energy_cap = 0.0;  // s^2 max |f|
  bool displaced = false;
  double separation = 0.0;
};

struct RescaledExperiment {
  std::vector<int> ks;
  Observable hamiltonian;      // f, displacing supp(u) at s = 1
  Observable density;          // u, the classical state density
  EquatorialChart chart{0.0, 0.9};
  std::function<double(double)> s_rule;  // hbar -> s
  double level = 0.5;                     // lambda in {u > lambda}
  int steps = kDefaultTimeSteps;
  double oversample = 1.5;
};

struct RescaledResult {
  std::vector<RescaledRow> rows;
  DecayFit fit_hbar;
  std::optional<DecayFit> fit_s2inv;  // absent when s^-2 hbar is constant across the sweep
};

// Checks that f displaces supp(u) at s = 1 (HypothesisViolated otherwise),
// then runs the rescaled dislocation at every k.
RescaledResult rescaled_experiment(const RescaledExperiment& ex, double threshold);

// Chart points of {u > level} on a lattice of the given spacing, pushed by x -> s x.
std::vector<SpherePoint> superlevel_samples(const Observable& u, const EquatorialChart& chart, double level, double s,
                                     double spacing = 0.02);

}  // namespace qsl

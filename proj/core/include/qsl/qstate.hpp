#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qsl/density.hpp"
#include "qsl/fit.hpp"
#include "qsl/phase_space.hpp"
#include "qsl/quantizer.hpp"

namespace qsl {

// ||sqrt(theta) sqrt(sigma)||_tr.
double fidelity(const DensityOperator& theta, const DensityOperator& sigma);
// Same, from precomputed square roots.
double fidelity_from_roots(const Matrix& sqrt_theta, const Matrix& sqrt_sigma);

struct Schatten {
  double op_norm = 0.0;
  double trace_norm = 0.0;
  double hilbert_schmidt = 0.0;
};
Schatten schatten(const Matrix& a);

// ||theta sigma||_op / (||theta||_op ||sigma||_op) for nonzero positive operators.
double gamma_q(const Matrix& theta, const Matrix& sigma);
double gamma_q(const DensityOperator& theta, const DensityOperator& sigma);

// ||g h|| / (||g|| ||h||) with uniform norms over the probe grid.
double gamma_cl(const Observable& g, const Observable& h, const ProbeGrid& grid);
double gamma_cl(const Observable& g, const Observable& h);

struct StateAtScale {
  std::shared_ptr<const QuantumSpace> space;
  DensityOperator state;
};

struct MicroProbe {
  std::string region_id;
  std::vector<std::pair<double, double>> masses;  // (hbar, nu_hbar(U))
  DecayFit fit;
  bool rapid_decay = false;
};

MicroProbe microsupport_probe(const std::vector<StateAtScale>& family, const Observable& region,
                              double threshold = 4.0);

}  // namespace qsl

#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsl/density.hpp"
#include "qsl/linalg.hpp"
#include "qsl/phase_space.hpp"
#include "qsl/quantizer.hpp"

namespace qsl {

// t -> F_t with U' = -(i/hbar) F_t U.
struct QuantumHamiltonianPath {
  std::function<Matrix(double)> generator;
  double hbar = 1.0;
  bool autonomous = false;

  static QuantumHamiltonianPath constant(Matrix f, double hbar);
  static QuantumHamiltonianPath time_dependent(std::function<Matrix(double)> f, double hbar);
  static QuantumHamiltonianPath toeplitz_path(std::shared_ptr<const QuantumSpace> space, const Observable& f);
};

struct Propagator {
  Matrix unitary;
  double t0 = 0.0, t1 = 1.0;
  int steps = 0;
  double unitarity_drift = 0.0;
  // Filled by propagate_with_history: U at every step boundary and the
  // midpoint generator used on each step.
  std::vector<Matrix> history;
  std::vector<Matrix> generators;
};

inline constexpr int kDefaultTimeSteps = 128;

// Midpoint exponential stepping; a single exponential when autonomous.
Propagator propagate(const QuantumHamiltonianPath& h, double t0, double t1, int steps = kDefaultTimeSteps);
Propagator propagate_with_history(const QuantumHamiltonianPath& h, double t0, double t1,
                                  int steps = kDefaultTimeSteps);

// Composite Simpson over [0, 1] of ||F_t||_op.
double quantum_energy(const QuantumHamiltonianPath& h, int steps = kDefaultTimeSteps);

struct DislocationReport {
  double fidelity_a = 1.0;
  double ell_q = 0.0;
  double ell_cl = 0.0;
  double gamma_q = 1.0;
  std::optional<double> gamma_cl;
  std::optional<double> b;
  std::optional<double> c;
  std::map<std::string, double> slacks;  // "qsl" = ell_q - arccos(a) hbar
};

DislocationReport run_dislocation(const std::shared_ptr<const QuantumSpace>& space, const DensityOperator& theta,
                                  const Observable& f, int steps = kDefaultTimeSteps,
                                  const std::optional<Observable>& g = std::nullopt);

struct EgorovResult {
  double residual = 0.0;
  double bound_integrand = 0.0;  // integral of |f_t, g o phi_t^-1|_{1,3}
  bool resolution_warning = false;
};

struct EgorovOptions {
  bool with_bound = true;
  int time_samples = 8;
  const ProbeGrid* grid = nullptr;
};

EgorovResult egorov_residual(const std::shared_ptr<const QuantumSpace>& space, const Observable& f,
                             const Observable& g, int steps = kDefaultTimeSteps, const EgorovOptions& opts = {});

struct UhlmannResult {
  double integral_I = 0.0;
  double arccos_term = 0.0;
  double fidelity_a = 1.0;
  double ell_q = 0.0;  // energy of the generator the propagator realizes
  bool holds = true;
  bool below_energy = true;
};

UhlmannResult uhlmann_bound(const QuantumHamiltonianPath& h, const DensityOperator& theta,
                            int steps = kDefaultTimeSteps);

struct QuantizationConstants {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

struct ConstantsOptions {
  const ProbeGrid* grid = nullptr;  // defaults to a 3000-point Fibonacci grid
  int time_samples = 8;             // Simpson intervals for the time integrals
  bool check_resolution = false;    // recompute on a 2x grid and compare b
};

struct SemiclassicalConstants {
  double b = 0.0;
  double c = 0.0;
  std::array<double, 5> terms{};
  bool resolution_warning = false;
};

SemiclassicalConstants semiclassical_constants(const Observable& g, const Observable& f,
                                               const QuantizationConstants& k, const ConstantsOptions& opts = {});

struct GammaComparison {
  double gamma_q = 0.0;
  double gamma_cl = 0.0;
  double b = 0.0;
  double c = 0.0;
  double hbar = 0.0;
  double slack_lo = 0.0;  // gamma_q - (gamma_cl - 3 b hbar)
  double slack_hi = 0.0;  // (gamma_cl + 2 b hbar)/(1 - b hbar)^2 - gamma_q
  double ell_q = 0.0;
  double ell_cl = 0.0;
  double energy_lo_slack = 0.0;  // ell_q - (ell_cl - c hbar)
  double energy_hi_slack = 0.0;  // ell_cl - ell_q
};

GammaComparison gamma_comparison(const std::shared_ptr<const QuantumSpace>& space, const Observable& g,
                                 const Observable& f, int steps, const QuantizationConstants& k,
                                 const std::optional<SemiclassicalConstants>& precomputed = std::nullopt,
                                 const ConstantsOptions& opts = {});

}  // namespace qsl

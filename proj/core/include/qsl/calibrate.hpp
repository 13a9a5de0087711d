#pragma once

// Fits the constants alpha, beta, gamma of the Garding, commutator and
// product estimates as 1.25 times the largest observed ratio
// residual / (hbar * norm combination) over a battery of functions.

#include <cstdint>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/phase_space.hpp"

namespace qsl {

class ThreadPool;

struct GammaPair {
  std::string name;
  Observable g;  // g >= 0, max g = 1
  Observable f;  // Hamiltonian
};

// Six (g, f) pairs with exact flows: displacing, half-displacing and
// non-displacing, one of them time-dependent.
std::vector<GammaPair> theorem_battery();

struct CalibrationBattery {
  std::vector<Observable> functions;                         // Garding
  std::vector<std::pair<Observable, Observable>> pairs;       // commutator and product
  std::vector<std::pair<Observable, Observable>> transports;  // (f, g) Egorov pairs, counted for beta

  std::uint64_t hash() const;
};

// Polynomial and bump functions plus g, g o phi^-1 and their product for
// every pair of the theorem battery.
CalibrationBattery default_battery();

inline constexpr double kCalibrationSafety = 1.25;

struct CalibrationRecord {
  QuantizationConstants constants;
  std::vector<int> ks;
  std::uint64_t battery_hash = 0;
  double max_ratio_alpha = 0.0, max_ratio_beta = 0.0, max_ratio_gamma = 0.0;
  std::string argmax_alpha, argmax_beta, argmax_gamma;
};

// Throws CalibrationIndeterminate when every residual of a constant is below
// the noise floor.
CalibrationRecord calibrate_constants(const std::vector<int>& ks, const CalibrationBattery& battery,
                                      double oversample = 1.5, ThreadPool* pool = nullptr);

std::string format_calibration(const CalibrationRecord& r);

}  // namespace qsl

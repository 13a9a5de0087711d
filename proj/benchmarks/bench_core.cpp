#include <benchmark/benchmark.h>

#include "qsl/dynamics.hpp"
#include "qsl/observables.hpp"
#include "qsl/qstate.hpp"
#include "qsl/quantizer.hpp"

namespace ob = qsl::observables;

static void BM_SpaceBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qsl::QuantumSpace::build(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SpaceBuild)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMillisecond);

static void BM_Toeplitz(benchmark::State& state) {
  const auto sp = qsl::QuantumSpace::build(static_cast<int>(state.range(0)));
  const qsl::Observable f = ob::cap_bump(qsl::Vec3(1, 0, 0), 0.3, 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(qsl::toeplitz(*sp, f));
}
BENCHMARK(BM_Toeplitz)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMillisecond);

static void BM_Fidelity(benchmark::State& state) {
  const auto sp = qsl::QuantumSpace::build(static_cast<int>(state.range(0)));
  auto density = [&](const qsl::Vec3& c) {
    return qsl::quantize_classical_state(
        *sp, qsl::ClassicalState::from_density(sp->quadrature_ptr(), ob::cap_bump(c, 0.3, 1.2)));
  };
  const qsl::DensityOperator a = density(qsl::Vec3(1, 0, 0)), b = density(qsl::Vec3(0, 1, 0));
  for (auto _ : state) {
    // Fresh copies so the cached square roots are recomputed.
    const qsl::DensityOperator x(a.matrix()), y(b.matrix());
    benchmark::DoNotOptimize(qsl::fidelity(x, y));
  }
}
BENCHMARK(BM_Fidelity)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMillisecond);

static void BM_Propagate(benchmark::State& state) {
  const auto sp = qsl::QuantumSpace::build(static_cast<int>(state.range(0)));
  const auto path = qsl::QuantumHamiltonianPath::toeplitz_path(sp, ob::coordinate(0) * ob::coordinate(2));
  for (auto _ : state) benchmark::DoNotOptimize(qsl::propagate(path, 0.0, 1.0, 16));
}
BENCHMARK(BM_Propagate)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

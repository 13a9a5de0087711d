#include <cmath>

#include "doctest.h"
#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/qstate.hpp"

using namespace qsl;

namespace {

DensityOperator diagonal(std::initializer_list<double> p) {
  Matrix m = Matrix::Zero(p.size(), p.size());
  int i = 0;
  for (double v : p) {
    m(i, i) = v;
    ++i;
  }
  return DensityOperator(m);
}

}  // namespace

TEST_CASE("fidelity of commuting states is the Bhattacharyya sum") {
  const auto a = diagonal({0.5, 0.3, 0.2}), b = diagonal({0.1, 0.1, 0.8});
  const double expect = std::sqrt(0.05) + std::sqrt(0.03) + std::sqrt(0.16);
  CHECK(fidelity(a, b) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
}

TEST_CASE("fidelity of pure states is the overlap modulus") {
  Vector u(2), v(2);
  u << 1.0, 0.0;
  v << std::cos(0.4), cplx(0.0, std::sin(0.4));
  CHECK(fidelity(DensityOperator::pure(u), DensityOperator::pure(v)) == doctest::Approx(std::cos(0.4)));
}

TEST_CASE("orthogonal supports have zero fidelity") {
  CHECK(fidelity(diagonal({1.0, 0.0}), diagonal({0.0, 1.0})) == doctest::Approx(0.0));
}

TEST_CASE("Schatten norms") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = -4.0;
  const Schatten s = schatten(a);
  CHECK(s.op_norm == doctest::Approx(4.0));
  CHECK(s.trace_norm == doctest::Approx(7.0));
  CHECK(s.hilbert_schmidt == doctest::Approx(5.0));
}

TEST_CASE("overlap ratios") {
  CHECK(gamma_q(diagonal({0.5, 0.5}), diagonal({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(gamma_q(diagonal({1.0, 0.0}), diagonal({0.0, 1.0})) == doctest::Approx(0.0));
  namespace ob = qsl::observables;
  const Observable g = ob::cap_bump(Vec3(1, 0, 0), 0.1, 0.5), h = ob::cap_bump(Vec3(-1, 0, 0), 0.1, 0.5);
  CHECK(gamma_cl(g, h) == doctest::Approx(0.0));
  CHECK(gamma_cl(g, g) == doctest::Approx(1.0));
}

TEST_CASE("density operator validation") {
  Matrix m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator{m}, Error);
  Matrix n = Matrix::Zero(2, 2);
  n(0, 0) = 1.5;
  n(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(n).validate(), Error);
  CHECK(DensityOperator::maximally_mixed(4).matrix().trace().real() == doctest::Approx(1.0));
}

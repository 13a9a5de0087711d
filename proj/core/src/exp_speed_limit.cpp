#include <algorithm>
#include <cmath>
#include <random>

#include "experiments_impl.hpp"
#include "qsl/error.hpp"
#include "qsl/qstate.hpp"

namespace qsl::detail {

namespace {

const char* kId = "speed-limit";

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Matrix gaussian(int rows, int cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cplx(n(rng_), n(rng_)) / std::sqrt(2.0);
    return m;
  }

  Matrix hermitian(int dim) {
    const Matrix g = gaussian(dim, dim);
    return 0.5 * (g + g.adjoint());
  }

  // Random positive operator of the given rank inside the first `span` basis
  // directions, unnormalized.
  Matrix positive(int dim, int rank, int offset = 0, int span = -1) {
    if (span < 0) span = dim - offset;
    Matrix g = Matrix::Zero(dim, rank);
    g.block(offset, 0, span, rank) = gaussian(span, rank);
    return g * g.adjoint();
  }

  DensityOperator density(int dim) {
    const Matrix p = positive(dim, integer(1, dim));
    return DensityOperator(hermitian_part(p / p.trace().real()));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ExperimentResult run_speed_limit(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  ExperimentResult r;
  r.experiment = kId;
  const auto c = [](const char* id) -> const Claim& { return claim(kId, id); };
  Sampler rng(*cfg.seed);

  // Random Hamiltonian paths F_t = A + t B.
  {
    const int runs = static_cast<int>(cfg.tolerance("runs", 500));
    const int max_dim = static_cast<int>(cfg.tolerance("max_dim", 32));
    const int steps = std::min(cfg.steps, 32);
    Table t{"speed_limit_random", {"run", "dim", "hbar", "autonomous", "fidelity", "ell_q", "uhlmann_I", "arccos_term"}, {}};
    double worst_qsl = kInf, worst_lo = kInf, worst_hi = kInf;
    for (int i = 0; i < runs; ++i) {
      const int dim = rng.integer(2, max_dim);
      const double hbar = rng.uniform(0.01, 1.0);
      const Matrix a = rng.hermitian(dim);
      const bool autonomous = rng.integer(0, 2) == 0;
      const Matrix b = autonomous ? Matrix::Zero(dim, dim) : rng.hermitian(dim);
      const double scale = hbar * rng.uniform(0.05, 3.0) / std::max(1e-12, op_norm_hermitian(a));
      const DensityOperator theta = rng.density(dim);
      const QuantumHamiltonianPath path =
          autonomous ? QuantumHamiltonianPath::constant(scale * a, hbar)
                     : QuantumHamiltonianPath::time_dependent([=](double s) { return Matrix(scale * (a + s * b)); },
                                                              hbar);
      const UhlmannResult u = uhlmann_bound(path, theta, steps);
      worst_qsl = std::min(worst_qsl, u.ell_q - u.arccos_term);
      worst_lo = std::min(worst_lo, u.integral_I - u.arccos_term);
      worst_hi = std::min(worst_hi, u.ell_q - u.integral_I);
      t.add({std::to_string(i), std::to_string(dim), format_number(hbar), format_bool(autonomous),
             format_number(u.fidelity_a), format_number(u.ell_q), format_number(u.integral_I),
             format_number(u.arccos_term)});
    }
    const std::string note = std::to_string(runs) + " runs, dim <= " + std::to_string(max_dim);
    r.add_verdict(c("speed-limit-random"), "min ell_q - arccos(a) hbar", ">=", -kSlack, worst_qsl, note);
    r.add_verdict(c("uhlmann-lower"), "min I - arccos(a) hbar", ">=", -kSlack, worst_lo, note);
    r.add_verdict(c("uhlmann-upper"), "min ell_q - I", ">=", -kSlack, worst_hi, note);
    r.tables.push_back(std::move(t));
  }

  // Equality: F = (pi/2) hbar sigma_x flips |0> to |1> with ell_q = (pi/2) hbar.
  {
    const double hbar = 0.1;
    Matrix sx = Matrix::Zero(2, 2);
    sx(0, 1) = sx(1, 0) = 1.0;
    Vector e0 = Vector::Zero(2);
    e0[0] = 1.0;
    const auto path = QuantumHamiltonianPath::constant(0.5 * kPi * hbar * sx, hbar);
    const UhlmannResult u = uhlmann_bound(path, DensityOperator::pure(e0), 1);
    const double gap = std::max({std::abs(u.ell_q - u.arccos_term), std::abs(u.ell_q - 0.5 * kPi * hbar),
                                 std::abs(u.fidelity_a)});
    r.add_verdict(c("speed-limit-equality"), "max(|ell_q - arccos(a) hbar|, |ell_q - pi hbar/2|, a)", "<=", 1e-10,
                  gap);
  }

  // Matrix inequalities on random pairs.
  {
    const int trials = static_cast<int>(cfg.tolerance("matrix_trials", 1000));
    const int max_dim = static_cast<int>(cfg.tolerance("matrix_max_dim", 64));
    double w_gamma = kInf, w_upper = kInf, w_pair = kInf, w_sym = kInf;
    for (int i = 0; i < trials; ++i) {
      const int dim = rng.integer(2, max_dim);
      DensityOperator theta = rng.density(dim);
      DensityOperator sigma = rng.density(dim);
      // Every tenth pair has orthogonal supports.
      if (i % 10 == 0) {
        const int split = rng.integer(1, dim - 1);
        const Matrix p = rng.positive(dim, rng.integer(1, split), 0, split);
        const Matrix q = rng.positive(dim, rng.integer(1, dim - split), split, dim - split);
        theta = DensityOperator(hermitian_part(p / p.trace().real()));
        sigma = DensityOperator(hermitian_part(q / q.trace().real()));
      }
      const double phi = fidelity(theta, sigma);
      const double nt = op_norm_hermitian(theta.matrix()), ns = op_norm_hermitian(sigma.matrix());
      w_gamma = std::min(w_gamma, phi / std::sqrt(nt * ns) - gamma_q(theta, sigma));
      w_upper = std::min(w_upper, dim * std::sqrt(op_norm(theta.matrix() * sigma.matrix())) - phi);
      w_pair = std::min(w_pair, phi - std::abs((theta.sqrt() * sigma.sqrt()).trace()));
      w_sym = std::min(w_sym, -std::abs(phi - fidelity(sigma, theta)));
    }
    const std::string note = std::to_string(trials) + " trials, dim <= " + std::to_string(max_dim);
    r.add_verdict(c("overlap-ratio-bound"), "min slack", ">=", -1e-10, w_gamma, note);
    r.add_verdict(c("fidelity-upper-bound"), "min slack", ">=", -1e-10, w_upper, note);
    r.add_verdict(c("pairing-bound"), "min slack", ">=", -1e-10, w_pair, note);
    r.add_verdict(c("fidelity-symmetry"), "-max |Phi(theta,sigma) - Phi(sigma,theta)|", ">=", -1e-10, w_sym, note);
  }
  return r;
}

}  // namespace qsl::detail

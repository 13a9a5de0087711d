#include <cmath>
#include <mutex>

#include "qsl/error.hpp"
#include "qsl/phase_space.hpp"

namespace qsl {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, ErrorKind::InvalidArgument, "Gauss-Legendre needs n >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

QuadratureRule QuadratureRule::product(int n_theta, int n_phi) {
  require(n_theta >= 1 && n_phi >= 1, ErrorKind::InvalidArgument, "empty quadrature");
  QuadratureRule r;
  gauss_legendre(n_theta, r.cos_theta, r.gl_weights);
  r.n_phi = n_phi;
  r.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  r.weights.reserve(r.nodes.capacity());
  const double dphi = 2.0 * kPi / n_phi;
  for (int j = 0; j < n_theta; ++j) {
    const double z = r.cos_theta[static_cast<std::size_t>(j)];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double wj = 0.5 * r.gl_weights[static_cast<std::size_t>(j)] * dphi;
    for (int l = 0; l < n_phi; ++l) {
      const double phi = l * dphi;
      r.nodes.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
      r.weights.push_back(wj);
    }
  }
  return r;
}

bool QuadratureRule::same_layout(const QuadratureRule& other) const {
  return n_phi == other.n_phi && cos_theta == other.cos_theta;
}

double integrate(const QuadratureRule& rule, const Observable& f, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i], t);
  return acc;
}

std::shared_ptr<const QuadratureRule> fine_rule() {
  static const auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::product(400, 800));
  return rule;
}

}  // namespace qsl

#include <array>
#include <cmath>
#include <map>

#include "qsl/error.hpp"
#include "qsl/phase_space.hpp"

namespace qsl {

namespace {

using Stencil = std::array<double, 5>;

constexpr std::array<Stencil, 5> kStencils = {{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

// Steps grow with order to keep round-off below truncation error.
constexpr std::array<double, 5> kStepScale = {1.0, 1.0, 1.0, 3.0, 10.0};

using Samples = std::array<std::array<double, 5>, 5>;

Samples sample(const Observable& f, const Vec3& x, const Vec3& e1, const Vec3& e2, double h, int reach,
               double t) {
  Samples s{};
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b)
      s[static_cast<std::size_t>(a + 2)][static_cast<std::size_t>(b + 2)] =
          f(exp_map(x, a * h * e1 + b * h * e2), t);
  return s;
}

double partial(const Samples& s, int p, int q, double h) {
  const Stencil& cp = kStencils[static_cast<std::size_t>(p)];
  const Stencil& cq = kStencils[static_cast<std::size_t>(q)];
  double acc = 0.0;
  for (std::size_t a = 0; a < 5; ++a) {
    if (cp[a] == 0.0) continue;
    for (std::size_t b = 0; b < 5; ++b)
      if (cq[b] != 0.0) acc += cp[a] * cq[b] * s[a][b];
  }
  return acc / std::pow(h, p + q);
}

bool all_zero(const Samples& s) {
  for (const auto& row : s)
    for (double v : row)
      if (v != 0.0) return false;
  return true;
}

}  // namespace

CkNorms ck_norms(const Observable& f, int order, const ProbeGrid& grid, double t, const CkOptions& opts) {
  require(order >= 0 && order <= 4, ErrorKind::InvalidArgument, "C^k norms available up to order 4");
  const auto ord = static_cast<std::size_t>(order);
  std::vector<double> coarse(ord + 1, 0.0), fine(ord + 1, 0.0), rich(ord + 1, 0.0);

  // Distinct step sizes and the highest order each one serves.
  std::map<double, int> steps;
  for (int j = 0; j <= order; ++j) {
    const double h = opts.base_step * kStepScale[static_cast<std::size_t>(j)];
    steps[h] = std::max(steps[h], j);
  }
  const double widest = steps.rbegin()->first;

  for (const Vec3& x : grid.points) {
    const auto [e1, e2] = tangent_frame(x);
    if (opts.skip_flat) {
      const Samples probe = sample(f, x, e1, e2, widest, 2, t);
      if (all_zero(probe)) continue;
    }
    std::map<double, std::pair<Samples, Samples>> cache;
    for (const auto& [h, top] : steps) {
      const int reach = top >= 3 ? 2 : 1;
      cache[h] = {sample(f, x, e1, e2, h, reach, t), sample(f, x, e1, e2, 0.5 * h, reach, t)};
    }
    for (int j = 0; j <= order; ++j) {
      const double h = opts.base_step * kStepScale[static_cast<std::size_t>(j)];
      const auto& [sh, sh2] = cache[h];
      double mc = 0.0, mf = 0.0, mr = 0.0;
      for (int p = 0; p <= j; ++p) {
        const double dc = partial(sh, p, j - p, h);
        const double df = partial(sh2, p, j - p, 0.5 * h);
        const double dr = (4.0 * df - dc) / 3.0;
        mc = std::max(mc, std::abs(dc));
        mf = std::max(mf, std::abs(df));
        mr = std::max(mr, std::abs(dr));
      }
      const auto js = static_cast<std::size_t>(j);
      coarse[js] = std::max(coarse[js], mc);
      fine[js] = std::max(fine[js], mf);
      rich[js] = std::max(rich[js], j == 0 ? mc : mr);
    }
  }

  CkNorms out;
  out.norms = rich;
  const double scale = rich.empty() ? 0.0 : rich[0];
  for (std::size_t j = 1; j <= ord; ++j) {
    require(std::isfinite(rich[j]), ErrorKind::DerivativeUnavailable, "non-finite C^k norm of " + f.name());
    if (std::abs(fine[j] - coarse[j]) > 0.05 * fine[j] + 1e-9 * (scale + 1.0)) out.resolution_warning = true;
  }
  return out;
}

double pair_norm(const CkNorms& f, const CkNorms& g, int n) {
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) acc += f[j] * g[n - j];
  return acc;
}

double pair_norm_13(const CkNorms& f, const CkNorms& g) {
  return f[1] * g[3] + f[2] * g[2] + f[3] * g[1];
}

}  // namespace qsl

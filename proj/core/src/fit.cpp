#include "qsl/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qsl/error.hpp"

namespace qsl {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  require(n >= 2 && y.size() == n, ErrorKind::InsufficientSamples, "line fit needs two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 1e-20 * static_cast<double>(n) * (1.0 + mx * mx), ErrorKind::InsufficientSamples, "line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

DecayFit fit_decay_order(std::span<const std::pair<double, double>> points, double threshold) {
  std::vector<double> lx, ly;
  std::vector<bool> clamped;
  for (const auto& [x, v] : points) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(v)) continue;
    const double a = std::abs(v);
    lx.push_back(std::log(x));
    ly.push_back(std::log(std::max(a, kNoiseFloor)));
    clamped.push_back(a < kNoiseFloor);
  }
  require(lx.size() >= 4, ErrorKind::InsufficientSamples, "decay fit needs at least 4 usable points");
  const LineFit line = fit_line(lx, ly);
  DecayFit f;
  f.slope = line.slope;
  f.intercept = line.intercept;
  f.threshold = threshold;
  f.x_min = std::exp(*std::min_element(lx.begin(), lx.end()));
  f.x_max = std::exp(*std::max_element(lx.begin(), lx.end()));
  // r^2 of the fitted line restricted to unclamped points.
  double my = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < ly.size(); ++i)
    if (!clamped[i]) {
      my += ly[i];
      ++n;
    } else {
      ++f.clamped;
    }
  if (n >= 2) {
    my /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < ly.size(); ++i) {
      if (clamped[i]) continue;
      const double pred = line.intercept + line.slope * lx[i];
      ss_res += (ly[i] - pred) * (ly[i] - pred);
      ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    f.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  } else {
    f.r2 = 0.0;
  }
  f.verdict = f.slope >= threshold && f.r2 >= kMinR2;
  return f;
}

std::vector<double> nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const auto m = static_cast<Eigen::Index>(y.size());
  const auto n = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    require(static_cast<Eigen::Index>(columns[static_cast<std::size_t>(j)].size()) == m,
            ErrorKind::DimensionMismatch, "nnls column length mismatch");
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), m);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double wmax = 1e-12 * (1.0 + b.norm());
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) {
        wmax = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      Eigen::MatrixXd ap(m, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) ap.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
      const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[static_cast<Eigen::Index>(c)];
      bool feasible = true;
      for (Eigen::Index j : idx)
        if (z[j] <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j : idx)
        if (z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (Eigen::Index j : idx)
        if (x[j] <= 1e-15) {
          x[j] = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
    }
  }
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace qsl

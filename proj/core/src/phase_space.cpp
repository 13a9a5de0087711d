#include "qsl/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsl/error.hpp"

namespace qsl {

SpherePoint::SpherePoint(const Vec3& v) {
  const double n = v.norm();
  require(std::isfinite(n) && n > 0.0, ErrorKind::InvalidArgument, "sphere point from zero vector");
  v_ = v / n;
}

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return SpherePoint(Vec3(st * std::cos(phi), st * std::sin(phi), std::cos(theta)));
}

double SpherePoint::theta() const { return std::acos(std::clamp(v_[2], -1.0, 1.0)); }
double SpherePoint::phi() const { return std::atan2(v_[1], v_[0]); }

double geodesic_distance(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::pair<Vec3, Vec3> tangent_frame(const Vec3& x) {
  int i = 0;
  if (std::abs(x[1]) < std::abs(x[i])) i = 1;
  if (std::abs(x[2]) < std::abs(x[i])) i = 2;
  Vec3 a = Vec3::Zero();
  a[i] = 1.0;
  Vec3 e1 = (a - a.dot(x) * x).normalized();
  Vec3 e2 = x.cross(e1);
  return {e1, e2};
}

Vec3 exp_map(const Vec3& x, const Vec3& v) {
  const double n = v.norm();
  if (n == 0.0) return x;
  return (std::cos(n) * x + std::sin(n) / n * v).normalized();
}

// ---------------------------------------------------------------------------

Observable::Observable() {
  auto impl = std::make_shared<Impl>();
  impl->name = "zero";
  impl->value = [](const Vec3&, double) { return 0.0; };
  impl->gradient = [](const Vec3&, double) { return Vec3::Zero().eval(); };
  impl->flow = [](const Vec3& x, double, double) { return x; };
  impl_ = std::move(impl);
}

Observable Observable::autonomous(std::string name, std::function<double(const Vec3&)> value,
                                  std::function<Vec3(const Vec3&)> gradient) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->value = [value = std::move(value)](const Vec3& x, double) { return value(x); };
  if (gradient)
    impl->gradient = [gradient = std::move(gradient)](const Vec3& x, double) { return gradient(x); };
  return Observable(std::move(impl));
}

Observable Observable::time_dependent(std::string name, ScalarField value, GradientField gradient) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->value = std::move(value);
  impl->gradient = std::move(gradient);
  impl->time_dependent = true;
  return Observable(std::move(impl));
}

Observable Observable::with(const std::function<void(Impl&)>& edit) const {
  auto impl = std::make_shared<Impl>(*impl_);
  edit(*impl);
  return Observable(std::move(impl));
}

Observable Observable::with_support(Cap cap) const {
  return with([&](Impl& i) { i.support = cap; });
}

Observable Observable::with_exact_flow(FlowMapFn flow) const {
  return with([&](Impl& i) { i.flow = std::move(flow); });
}

Observable Observable::renamed(std::string name) const {
  return with([&](Impl& i) { i.name = std::move(name); });
}

Observable Observable::frozen_at(double t) const {
  if (!impl_->time_dependent) return *this;
  auto src = impl_;
  return with([&](Impl& i) {
    i.time_dependent = false;
    i.value = [src, t](const Vec3& x, double) { return src->value(x, t); };
    if (src->gradient) i.gradient = [src, t](const Vec3& x, double) { return src->gradient(x, t); };
    i.flow = {};
  });
}

namespace {

std::optional<Cap> union_hint(const std::optional<Cap>& a, const std::optional<Cap>& b) {
  if (!a || !b) return std::nullopt;
  const double d = geodesic_distance(a->center, b->center);
  if (d + b->radius <= a->radius) return a;
  if (d + a->radius <= b->radius) return b;
  // Enclosing cap centered at a's center; loose but valid.
  return Cap{a->center, std::min(kPi, d + b->radius)};
}

}  // namespace

Observable operator+(const Observable& a, const Observable& b) {
  auto impl = std::make_shared<Observable::Impl>();
  impl->name = a.name() + "+" + b.name();
  auto pa = a.impl_, pb = b.impl_;
  impl->value = [pa, pb](const Vec3& x, double t) { return pa->value(x, t) + pb->value(x, t); };
  if (pa->gradient && pb->gradient)
    impl->gradient = [pa, pb](const Vec3& x, double t) {
      return (pa->gradient(x, t) + pb->gradient(x, t)).eval();
    };
  impl->time_dependent = pa->time_dependent || pb->time_dependent;
  impl->support = union_hint(pa->support, pb->support);
  return Observable(std::move(impl));
}

Observable operator-(const Observable& a, const Observable& b) { return a + (-1.0) * b; }

Observable operator*(double c, const Observable& a) {
  auto impl = std::make_shared<Observable::Impl>(*a.impl_);
  auto pa = a.impl_;
  impl->name = std::to_string(c) + "*" + a.name();
  impl->value = [pa, c](const Vec3& x, double t) { return c * pa->value(x, t); };
  if (pa->gradient)
    impl->gradient = [pa, c](const Vec3& x, double t) { return (c * pa->gradient(x, t)).eval(); };
  if (pa->flow) {
    // The flow of c*f is the flow of f run for c times as long.
    if (pa->time_dependent)
      impl->flow = {};
    else
      impl->flow = [pa, c](const Vec3& x, double t0, double t1) { return pa->flow(x, c * t0, c * t1); };
  }
  if (c == 0.0) impl->support = std::nullopt;
  return Observable(std::move(impl));
}

Observable operator*(const Observable& a, const Observable& b) {
  auto impl = std::make_shared<Observable::Impl>();
  impl->name = a.name() + "*" + b.name();
  auto pa = a.impl_, pb = b.impl_;
  impl->value = [pa, pb](const Vec3& x, double t) { return pa->value(x, t) * pb->value(x, t); };
  if (pa->gradient && pb->gradient)
    impl->gradient = [pa, pb](const Vec3& x, double t) {
      return (pa->value(x, t) * pb->gradient(x, t) + pb->value(x, t) * pa->gradient(x, t)).eval();
    };
  impl->time_dependent = pa->time_dependent || pb->time_dependent;
  if (pa->support)
    impl->support = pa->support;
  else
    impl->support = pb->support;
  return Observable(std::move(impl));
}

// ---------------------------------------------------------------------------

Vec3 tangent_gradient(const Observable& f, const Vec3& x, double t) {
  if (f.has_gradient()) {
    Vec3 g = f.ambient_gradient(x, t);
    g -= g.dot(x) * x;
    require(g.allFinite(), ErrorKind::DerivativeUnavailable, "non-finite gradient of " + f.name());
    return g;
  }
  const auto [e1, e2] = tangent_frame(x);
  auto diff = [&](const Vec3& e, double h) {
    return (f(exp_map(x, h * e), t) - f(exp_map(x, -h * e), t)) / (2.0 * h);
  };
  constexpr double h = 2e-4;
  const double d1 = (4.0 * diff(e1, 0.5 * h) - diff(e1, h)) / 3.0;
  const double d2 = (4.0 * diff(e2, 0.5 * h) - diff(e2, h)) / 3.0;
  require(std::isfinite(d1) && std::isfinite(d2), ErrorKind::DerivativeUnavailable,
          "finite differences failed for " + f.name());
  return d1 * e1 + d2 * e2;
}

Vec3 hamiltonian_vector_field(const Observable& f, const SpherePoint& x, double t) {
  return 2.0 * x.vec().cross(tangent_gradient(f, x.vec(), t));
}

double poisson_bracket(const Observable& f, const Observable& g, const SpherePoint& x, double t) {
  const Vec3 df = tangent_gradient(f, x.vec(), t);
  const Vec3 dg = tangent_gradient(g, x.vec(), t);
  return 2.0 * x.vec().dot(dg.cross(df));
}

Observable poisson_bracket(const Observable& f, const Observable& g) {
  auto value = [f, g](const Vec3& x, double t) {
    const Vec3 df = tangent_gradient(f, x, t);
    const Vec3 dg = tangent_gradient(g, x, t);
    return 2.0 * x.dot(dg.cross(df));
  };
  if (f.is_time_dependent() || g.is_time_dependent())
    return Observable::time_dependent("{" + f.name() + "," + g.name() + "}", value);
  return Observable::autonomous("{" + f.name() + "," + g.name() + "}",
                                [value](const Vec3& x) { return value(x, 0.0); });
}

// ---------------------------------------------------------------------------

ProbeGrid ProbeGrid::fibonacci(int n) {
  require(n >= 1, ErrorKind::InvalidArgument, "probe grid needs at least one point");
  ProbeGrid g;
  g.points.reserve(static_cast<std::size_t>(n));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    g.points.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return g;
}

double ProbeGrid::spacing() const {
  return std::sqrt(4.0 * kPi / static_cast<double>(std::max<std::size_t>(1, points.size())));
}

const ProbeGrid& default_probe_grid() {
  static const ProbeGrid grid = ProbeGrid::fibonacci(20000);
  return grid;
}

double uniform_norm(const Observable& f, const ProbeGrid& grid, double t) {
  const std::size_t n = grid.points.size();
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = std::abs(f(grid.points[i], t));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(6, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  double best = n ? vals[order[0]] : 0.0;
  if (best == 0.0) return 0.0;
  for (std::size_t r = 0; r < top; ++r) {
    Vec3 x = grid.points[order[r]];
    double fx = vals[order[r]];
    double step = grid.spacing();
    for (int it = 0; it < 400 && step > 1e-9; ++it) {
      const auto [e1, e2] = tangent_frame(x);
      bool moved = false;
      for (const Vec3& d : {e1, Vec3(-e1), e2, Vec3(-e2)}) {
        const Vec3 y = exp_map(x, step * d);
        const double fy = std::abs(f(y, t));
        if (fy > fx) {
          x = y;
          fx = fy;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, fx);
  }
  return best;
}

double uniform_norm(const Observable& f, double t) { return uniform_norm(f, default_probe_grid(), t); }

// ---------------------------------------------------------------------------

namespace {

Vec3 field_at(const Observable& f, const Vec3& y, double t) {
  const Vec3 x = y.normalized();
  return 2.0 * x.cross(tangent_gradient(f, x, t));
}

}  // namespace

Vec3 rk4_flow(const Observable& f, const Vec3& x0, double t0, double t1, int steps, double* drift) {
  require(steps >= 1, ErrorKind::InvalidArgument, "flow needs at least one step");
  const double dt = (t1 - t0) / steps;
  Vec3 x = x0;
  double max_drift = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * dt;
    const Vec3 k1 = field_at(f, x, t);
    const Vec3 k2 = field_at(f, x + 0.5 * dt * k1, t + 0.5 * dt);
    const Vec3 k3 = field_at(f, x + 0.5 * dt * k2, t + 0.5 * dt);
    const Vec3 k4 = field_at(f, x + dt * k3, t + dt);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require(x.allFinite(), ErrorKind::IntegrationDiverged, "non-finite state in flow of " + f.name());
    x.normalize();
    max_drift = std::max(max_drift, std::abs(x.norm() - 1.0));
  }
  if (drift) *drift = max_drift;
  return x;
}

Vec3 flow_map(const Observable& f, const Vec3& x, double t0, double t1, int steps) {
  if (t0 == t1) return x;
  if (f.exact_flow()) return f.exact_flow()(x, t0, t1);
  const int n = std::max(8, static_cast<int>(std::ceil(steps * std::abs(t1 - t0))));
  return rk4_flow(f, x, t0, t1, n);
}

namespace {

double path_length(const Observable& f, double t0, double t1, int steps, const ProbeGrid& grid) {
  if (!f.is_time_dependent()) return std::abs(t1 - t0) * uniform_norm(f, grid);
  int n = std::max(2, steps);
  if (n % 2) ++n;
  const double h = (t1 - t0) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * uniform_norm(f, grid, t0 + i * h);
  }
  return std::abs(acc * h / 3.0);
}

}  // namespace

FlowResult evolve_points(const Observable& f, std::span<const SpherePoint> xs, double t0, double t1,
                         int steps) {
  require(steps >= 1, ErrorKind::InvalidArgument, "evolve_point needs steps >= 1");
  FlowResult r;
  r.steps = steps;
  r.endpoints.reserve(xs.size());
  for (const auto& x : xs) {
    double drift = 0.0;
    r.endpoints.emplace_back(rk4_flow(f, x.vec(), t0, t1, steps, &drift));
    r.max_sphere_drift = std::max(r.max_sphere_drift, drift);
  }
  r.path_length_hofer = path_length(f, t0, t1, std::min(steps, 64), default_probe_grid());
  return r;
}

FlowResult evolve_point(const Observable& f, const SpherePoint& x, double t0, double t1, int steps) {
  return evolve_points(f, std::span<const SpherePoint>(&x, 1), t0, t1, steps);
}

double hofer_length(const Observable& f, int steps, const ProbeGrid& grid) {
  return path_length(f, 0.0, 1.0, steps, grid);
}

double hofer_length(const Observable& f, int steps) { return hofer_length(f, steps, default_probe_grid()); }

Observable transport(const Observable& g, const Observable& f, double t, int steps_per_unit) {
  if (t == 0.0) return g;
  auto value = [g, f, t, steps_per_unit](const Vec3& x) {
    return g(flow_map(f, x, t, 0.0, steps_per_unit));
  };
  Observable out = Observable::autonomous(g.name() + "@" + f.name(), value);
  if (g.support_hint() && f.exact_flow()) {
    const Vec3 c = f.exact_flow()(g.support_hint()->center, 0.0, t);
    // Exact flows provided here are isometries on the hinted cap.
    out = out.with_support(Cap{c, g.support_hint()->radius});
  }
  return out;
}

DisplacementResult displacement_check(const Observable& f, std::span<const SpherePoint> region,
                                      double margin, int steps) {
  require(!region.empty(), ErrorKind::InvalidRegion, "displacement check on empty sample set");
  std::vector<Vec3> images;
  images.reserve(region.size());
  for (const auto& x : region) images.push_back(flow_map(f, x.vec(), 0.0, 1.0, steps));
  double max_dot = -1.0;
  for (const auto& y : images)
    for (const auto& x : region) max_dot = std::max(max_dot, y.dot(x.vec()));
  // Recover the separation accurately from the closest pair.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : images)
    for (const auto& x : region)
      if (y.dot(x.vec()) >= max_dot - 1e-12) best = std::min(best, geodesic_distance(y, x.vec()));
  DisplacementResult r;
  r.min_separation = best;
  r.displaced = best > margin;
  return r;
}

// ---------------------------------------------------------------------------

double chart_geodesic_radius(double r) { return std::acos(std::clamp(1.0 - r * r, -1.0, 1.0)); }

EquatorialChart::EquatorialChart(double phi0, double radius) : phi0_(phi0), radius_(radius) {
  require(radius > 0.0 && radius < 1.0, ErrorKind::InvalidArgument, "chart radius must lie in (0, 1)");
}

SpherePoint EquatorialChart::center() const { return SpherePoint::from_angles(kPi / 2, phi0_); }

std::pair<Vec3, Vec3> EquatorialChart::frame() const {
  return {Vec3(-std::sin(phi0_), std::cos(phi0_), 0.0), Vec3(0.0, 0.0, 1.0)};
}

Vec2 EquatorialChart::to_chart(const Vec3& x) const {
  const Vec3 c = center().vec();
  const auto [e1, e2] = frame();
  const Vec2 t(e1.dot(x), e2.dot(x));
  const double n = t.norm();
  if (n == 0.0) return Vec2::Zero();
  return std::sqrt(std::max(0.0, 1.0 - c.dot(x))) * t / n;
}

Vec3 EquatorialChart::from_chart(const Vec2& X) const {
  const Vec3 c = center().vec();
  const auto [e1, e2] = frame();
  const double r2 = X.squaredNorm();
  const double cd = std::clamp(1.0 - r2, -1.0, 1.0);
  const double sd = std::sqrt(std::max(0.0, 1.0 - cd * cd));
  const double n = std::sqrt(r2);
  if (n == 0.0) return c;
  return (cd * c + sd * (X[0] / n * e1 + X[1] / n * e2)).normalized();
}

bool EquatorialChart::in_domain(const Vec2& X) const { return X.norm() < 1.0; }

bool EquatorialChart::contains(const Vec3& x) const { return to_chart(x).norm() < radius_; }

// ---------------------------------------------------------------------------

ClassicalState ClassicalState::from_density(std::shared_ptr<const QuadratureRule> rule, const Observable& u) {
  require(rule != nullptr, ErrorKind::InvalidArgument, "density state needs a quadrature rule");
  GridDensity g;
  g.values.resize(rule->size());
  double mass = 0.0;
  for (std::size_t i = 0; i < rule->size(); ++i) {
    double v = u(rule->nodes[i]);
    require(std::isfinite(v) && v >= -1e-12, ErrorKind::InvalidState, "negative density in " + u.name());
    v = std::max(0.0, v);
    g.values[i] = v;
    mass += rule->weights[i] * v;
  }
  require(mass > 0.0, ErrorKind::InvalidState, "density " + u.name() + " has zero mass");
  for (double& v : g.values) v /= mass;
  g.density = (1.0 / mass) * u;
  g.rule = std::move(rule);
  return ClassicalState(std::move(g));
}

ClassicalState ClassicalState::from_atoms(std::vector<SpherePoint> points, std::vector<double> probabilities) {
  require(!points.empty() && points.size() == probabilities.size(), ErrorKind::InvalidState,
          "atoms need matching points and probabilities");
  double mass = 0.0;
  for (double p : probabilities) {
    require(std::isfinite(p) && p >= 0.0, ErrorKind::InvalidState, "negative atom probability");
    mass += p;
  }
  require(mass > 0.0, ErrorKind::InvalidState, "atoms carry zero mass");
  for (double& p : probabilities) p /= mass;
  return ClassicalState(Atoms{std::move(points), std::move(probabilities)});
}

double ClassicalState::total_mass() const {
  if (const auto* g = std::get_if<GridDensity>(&data_)) {
    double m = 0.0;
    for (std::size_t i = 0; i < g->values.size(); ++i) m += g->rule->weights[i] * g->values[i];
    return m;
  }
  const auto& a = std::get<Atoms>(data_);
  double m = 0.0;
  for (double p : a.probabilities) m += p;
  return m;
}

// ---------------------------------------------------------------------------

namespace {

const ProbeGrid& support_probe() {
  static const ProbeGrid grid = ProbeGrid::fibonacci(4000);
  return grid;
}


Observable rescale_scaled(const Observable& f, const EquatorialChart& chart, double s, double factor) {
  auto value = [f, chart, s, factor](const Vec3& x, double t) {
    const Vec2 X = chart.to_chart(x) / s;
    if (X.norm() >= chart.radius()) return 0.0;
    return factor * f(chart.from_chart(X), t);
  };
  const std::string name = f.name() + "|s=" + std::to_string(s);
  Observable out = f.is_time_dependent()
                       ? Observable::time_dependent(name, value)
                       : Observable::autonomous(name, [value](const Vec3& x) { return value(x, 0.0); });
  if (f.exact_flow() && factor == s * s) {
    auto flow = f.exact_flow();
    out = out.with_exact_flow([flow, chart, s](const Vec3& x, double t0, double t1) {
      const Vec2 X = chart.to_chart(x) / s;
      if (X.norm() >= chart.radius()) return x;
      const Vec3 y = flow(chart.from_chart(X), t0, t1);
      return chart.from_chart(s * chart.to_chart(y));
    });
  }
  if (f.support_hint()) {
    const Cap hint = *f.support_hint();
    const Vec2 c = chart.to_chart(hint.center);
    const auto [e1, e2] = tangent_frame(hint.center);
    double reach = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double a = 2.0 * kPi * i / 64;
      const Vec3 b = exp_map(hint.center, std::min(hint.radius, kPi) * (std::cos(a) * e1 + std::sin(a) * e2));
      reach = std::max(reach, (chart.to_chart(b) - c).norm());
    }
    out = out.with_support(Cap{chart.from_chart(s * c), std::min(kPi, 1.5 * std::sqrt(2.0) * s * reach)});
  }
  return out;
}

void check_scale(double s) {
  require(s > 1e-6 && s <= 1.0, ErrorKind::InvalidArgument, "rescale factor must lie in (1e-6, 1]");
}

}  // namespace

void require_inside_chart(const Observable& f, const EquatorialChart& chart) {
  const double times[] = {0.0, 0.5, 1.0};
  for (const auto& x : support_probe().points) {
    if (chart.contains(x)) continue;
    for (double t : times) {
      require(std::abs(f(x, t)) <= 1e-12, ErrorKind::ChartOverflow,
              f.name() + " is not supported inside the chart");
      if (!f.is_time_dependent()) break;
    }
  }
}

Observable rescale(const Observable& f, const EquatorialChart& chart, double s) {
  check_scale(s);
  require_inside_chart(f, chart);
  if (s == 1.0) return f;
  return rescale_scaled(f, chart, s, s * s);
}

ClassicalState rescale(const ClassicalState& tau, const EquatorialChart& chart, double s) {
  check_scale(s);
  auto move_point = [&](const Vec3& x) {
    require(chart.contains(x), ErrorKind::ChartOverflow, "state mass outside the chart");
    return SpherePoint(chart.from_chart(s * chart.to_chart(x)));
  };
  if (const auto* a = std::get_if<Atoms>(&tau.data())) {
    std::vector<SpherePoint> pts;
    for (const auto& p : a->points) pts.push_back(move_point(p.vec()));
    return ClassicalState::from_atoms(std::move(pts), a->probabilities);
  }
  const auto& g = std::get<GridDensity>(tau.data());
  if (g.density) {
    require_inside_chart(*g.density, chart);
    if (s == 1.0) return tau;
    return ClassicalState::from_density(g.rule, rescale_scaled(*g.density, chart, s, 1.0 / (s * s)));
  }
  std::vector<SpherePoint> pts;
  std::vector<double> probs;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double m = g.rule->weights[i] * g.values[i];
    if (m <= 0.0) continue;
    pts.push_back(move_point(g.rule->nodes[i]));
    probs.push_back(m);
  }
  return ClassicalState::from_atoms(std::move(pts), std::move(probs));
}

}  // namespace qsl

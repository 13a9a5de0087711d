#pragma once

// Classical side of the correspondence on the unit sphere.
//
// The symplectic form is half the standard area form, so the total volume is
// 2*pi. With this normalization the Hamiltonian vector field of f is
// X_f(x) = 2 x cross grad f(x), and {f, g} = df(X_g).

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qsl {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

class SpherePoint {
 public:
  SpherePoint() : v_(0.0, 0.0, 1.0) {}
  // Normalizes; throws InvalidArgument for a zero or non-finite vector.
  explicit SpherePoint(const Vec3& v);
  static SpherePoint from_angles(double theta, double phi);

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  double theta() const;
  double phi() const;

 private:
  Vec3 v_;
};

double geodesic_distance(const Vec3& a, const Vec3& b);
// Orthonormal tangent frame (e1, e2) at x with e1 x e2 = x.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& x);
Vec3 exp_map(const Vec3& x, const Vec3& v);

struct Cap {
  Vec3 center;
  double radius;  // geodesic
};

using ScalarField = std::function<double(const Vec3&, double)>;
using GradientField = std::function<Vec3(const Vec3&, double)>;
// Exact time-(t0 -> t1) map of a Hamiltonian, when known in closed form.
using FlowMapFn = std::function<Vec3(const Vec3&, double, double)>;

class Observable {
 public:
  Observable();  // identically zero

  static Observable autonomous(std::string name, std::function<double(const Vec3&)> value,
                               std::function<Vec3(const Vec3&)> gradient = {});
  static Observable time_dependent(std::string name, ScalarField value,
                                   GradientField gradient = {});

  double operator()(const Vec3& x, double t = 0.0) const { return impl_->value(x, t); }
  double operator()(const SpherePoint& x, double t = 0.0) const { return impl_->value(x.vec(), t); }

  bool has_gradient() const { return static_cast<bool>(impl_->gradient); }
  // Ambient gradient as supplied; only meaningful when has_gradient().
  Vec3 ambient_gradient(const Vec3& x, double t = 0.0) const { return impl_->gradient(x, t); }

  bool is_time_dependent() const { return impl_->time_dependent; }
  const std::string& name() const { return impl_->name; }
  const std::optional<Cap>& support_hint() const { return impl_->support; }
  const FlowMapFn& exact_flow() const { return impl_->flow; }

  Observable with_support(Cap cap) const;
  Observable with_exact_flow(FlowMapFn flow) const;
  Observable renamed(std::string name) const;
  Observable frozen_at(double t) const;

  friend Observable operator+(const Observable& a, const Observable& b);
  friend Observable operator-(const Observable& a, const Observable& b);
  friend Observable operator*(double c, const Observable& a);
  friend Observable operator*(const Observable& a, const Observable& b);

 private:
  struct Impl {
    std::string name;
    ScalarField value;
    GradientField gradient;
    bool time_dependent = false;
    std::optional<Cap> support;
    FlowMapFn flow;
  };
  explicit Observable(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  Observable with(const std::function<void(Impl&)>& edit) const;

  std::shared_ptr<const Impl> impl_;
};

// Tangential gradient with respect to the round metric: analytic when
// supplied, otherwise Richardson-extrapolated central differences.
Vec3 tangent_gradient(const Observable& f, const Vec3& x, double t = 0.0);
Vec3 hamiltonian_vector_field(const Observable& f, const SpherePoint& x, double t = 0.0);
double poisson_bracket(const Observable& f, const Observable& g, const SpherePoint& x, double t = 0.0);
Observable poisson_bracket(const Observable& f, const Observable& g);

// ---------------------------------------------------------------------------
// Probe grids and uniform norms

struct ProbeGrid {
  std::vector<Vec3> points;
  static ProbeGrid fibonacci(int n);
  double spacing() const;
};

// Fibonacci grid of 20000 points, built once.
const ProbeGrid& default_probe_grid();

// max |f_t| on the grid, refined by local pattern search around the best points.
double uniform_norm(const Observable& f, const ProbeGrid& grid, double t = 0.0);
double uniform_norm(const Observable& f, double t = 0.0);

// ---------------------------------------------------------------------------
// Flows

struct FlowResult {
  std::vector<SpherePoint> endpoints;
  double path_length_hofer = 0.0;
  int steps = 0;
  double max_sphere_drift = 0.0;
};

// Classical RK4 with projection to the sphere after every step.
Vec3 rk4_flow(const Observable& f, const Vec3& x, double t0, double t1, int steps,
              double* drift = nullptr);
// Uses the closed-form flow when the Hamiltonian carries one, RK4 otherwise.
Vec3 flow_map(const Observable& f, const Vec3& x, double t0, double t1, int steps = 256);

FlowResult evolve_point(const Observable& f, const SpherePoint& x, double t0, double t1, int steps);
FlowResult evolve_points(const Observable& f, std::span<const SpherePoint> xs, double t0, double t1,
                         int steps);

double hofer_length(const Observable& f, int steps, const ProbeGrid& grid);
double hofer_length(const Observable& f, int steps = 64);

// g composed with the inverse time-t flow of f, i.e. g transported by the flow.
Observable transport(const Observable& g, const Observable& f, double t, int steps_per_unit = 256);

struct DisplacementResult {
  bool displaced = false;
  double min_separation = 0.0;
};

DisplacementResult displacement_check(const Observable& f, std::span<const SpherePoint> region,
                                      double margin = 1e-3, int steps = 256);

// ---------------------------------------------------------------------------
// Darboux chart around a point c of the equator: the Lambert equal-area map
// X = sqrt(1 - c.x) u, with u the unit tangent direction of x seen from c in
// the frame (e_phi, e_3). Then dX1 ^ dX2 = omega, rotations about c act
// linearly, and the poles sit on the circle |X| = 1.

// Geodesic radius of the chart disk |X| < r.
double chart_geodesic_radius(double r);

class EquatorialChart {
 public:
  EquatorialChart(double phi0, double radius);

  SpherePoint center() const;
  std::pair<Vec3, Vec3> frame() const;
  double radius() const { return radius_; }
  double phi0() const { return phi0_; }

  Vec2 to_chart(const Vec3& x) const;
  Vec3 from_chart(const Vec2& X) const;
  bool in_domain(const Vec2& X) const;
  bool contains(const Vec3& x) const;  // inside the chart disk

 private:
  double phi0_;
  double radius_;
};

// ---------------------------------------------------------------------------
// Quadrature on the sphere; weights sum to 2*pi.

struct QuadratureRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  // Product layout (theta-major): cos(theta_j) Gauss-Legendre, phi_l = 2 pi l / n_phi.
  std::vector<double> cos_theta;
  std::vector<double> gl_weights;
  int n_phi = 0;

  int n_theta() const { return static_cast<int>(cos_theta.size()); }
  std::size_t size() const { return nodes.size(); }
  bool same_layout(const QuadratureRule& other) const;

  static QuadratureRule product(int n_theta, int n_phi);
};

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);
double integrate(const QuadratureRule& rule, const Observable& f, double t = 0.0);
std::shared_ptr<const QuadratureRule> fine_rule();  // 400 x 800 product rule, built once

// ---------------------------------------------------------------------------
// Classical states

struct GridDensity {
  std::shared_ptr<const QuadratureRule> rule;
  std::vector<double> values;  // density u with sum w_i u_i = 1
  std::optional<Observable> density;
};

struct Atoms {
  std::vector<SpherePoint> points;
  std::vector<double> probabilities;
};

class ClassicalState {
 public:
  // Normalizes u on the rule; throws InvalidState for negative or zero mass.
  static ClassicalState from_density(std::shared_ptr<const QuadratureRule> rule, const Observable& u);
  static ClassicalState from_atoms(std::vector<SpherePoint> points, std::vector<double> probabilities);

  const std::variant<GridDensity, Atoms>& data() const { return data_; }
  bool is_grid() const { return std::holds_alternative<GridDensity>(data_); }
  double total_mass() const;

 private:
  explicit ClassicalState(std::variant<GridDensity, Atoms> d) : data_(std::move(d)) {}
  std::variant<GridDensity, Atoms> data_;
};

// f_s(x) = s^2 f(x/s) in chart coordinates, zero outside.
// Throws ChartOverflow unless f vanishes off the chart disk.
void require_inside_chart(const Observable& f, const EquatorialChart& chart);
Observable rescale(const Observable& f, const EquatorialChart& chart, double s);
// Pushforward under x -> s x in chart coordinates.
ClassicalState rescale(const ClassicalState& tau, const EquatorialChart& chart, double s);

// ---------------------------------------------------------------------------
// C^k seminorms: max over probe points of the largest partial derivative of
// order j in geodesic normal coordinates.

struct CkNorms {
  std::vector<double> norms;
  bool resolution_warning = false;
  double operator[](int j) const { return norms.at(static_cast<std::size_t>(j)); }
};

struct CkOptions {
  double base_step = 1e-3;
  // Points where f vanishes identically on the stencil are skipped.
  bool skip_flat = true;
};

CkNorms ck_norms(const Observable& f, int order, const ProbeGrid& grid, double t = 0.0,
                 const CkOptions& opts = {});

double pair_norm(const CkNorms& f, const CkNorms& g, int n);
double pair_norm_13(const CkNorms& f, const CkNorms& g);

}  // namespace qsl

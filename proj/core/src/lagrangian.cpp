#include "qsl/lagrangian.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "qsl/error.hpp"

namespace qsl {

Rational Rational::make(long num, long den) {
  require(den != 0, ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  return {num / g, den / g};
}

LatitudeCircle LatitudeCircle::make(Rational t0) {
  t0 = Rational::make(t0.num, t0.den);
  require(t0.num > 0 && t0.num < t0.den, ErrorKind::InvalidArgument, "t0 must lie in (0, 1)");
  return {t0, Rational::make(t0.den - t0.num, t0.den), t0.den};
}

ProfileFunction::ProfileFunction(std::function<double(double)> f, Parity parity)
    : f_(std::move(f)), parity_(parity) {}

std::vector<double> ProfileFunction::samples(int n) const {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f_(2.0 * kPi * i / n);
  return out;
}

ProfileFunction ProfileFunction::zero() { return constant(0.0); }

ProfileFunction ProfileFunction::constant(double c) {
  return {[c](double) { return c; }, Parity::Even};
}

ProfileFunction operator+(const ProfileFunction& a, const ProfileFunction& b) {
  const Parity p = a.parity_ == b.parity_ ? a.parity_ : Parity::None;
  return {[fa = a.f_, fb = b.f_](double t) { return fa(t) + fb(t); }, p};
}

ProfileFunction operator*(double c, const ProfileFunction& a) {
  return {[c, fa = a.f_](double t) { return c * fa(t); }, a.parity_};
}

double circle_integral(const std::function<double(double)>& f, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(2.0 * kPi * i / n);
  return s * 2.0 * kPi / n;
}

cplx circle_integral_complex(const std::function<cplx(double)>& f, int n) {
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) s += f(2.0 * kPi * i / n);
  return s * (2.0 * kPi / n);
}

namespace {

// Reduces theta to (-pi, pi].
double wrap(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

const Plateau& profile_shape() {
  static const Plateau h(0.0, kPi, kPi / 5, 4 * kPi / 5);
  return h;
}

double half_integral(double s) {
  return 0.5 * circle_integral([s](double t) { return std::cos(s * kPi * profile_shape()(std::abs(wrap(t)))); });
}

ProfileFunction odd_profile(double s) {
  return {[s](double t) {
            const double w = wrap(t);
            const double v = s * kPi * profile_shape()(std::abs(w));
            return w < 0.0 ? -v : v;
          },
          Parity::Odd};
}

}  // namespace

Dislocator dislocator_profile(double tol, const std::optional<std::function<double(double)>>& density) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  double lo = 0.5, hi = 1.0;
  Dislocator d{ProfileFunction::zero(), 0.0, half_integral(lo), half_integral(hi)};
  require(d.bracket_lo > 0.0 && d.bracket_hi < 0.0, ErrorKind::BracketingFailure, "no sign change on (1/2, 1)");
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double v = half_integral(mid);
    if (std::abs(v) <= tol) break;
    (v > 0.0 ? lo : hi) = mid;
  }
  require(std::abs(half_integral(mid)) <= tol, ErrorKind::BracketingFailure, "bisection did not reach tolerance");
  d.s_star = mid;
  d.f0 = odd_profile(mid);
  if (!density) return d;

  // Reparametrize by the cumulative distribution of the density.
  const auto& delta = *density;
  const int n = 4096;
  std::vector<double> cdf(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    const double v = delta(t);
    require(v > 0.0, ErrorKind::InvalidArgument, "density must be positive");
    cdf[static_cast<std::size_t>(i) + 1] = cdf[static_cast<std::size_t>(i)] + v;
  }
  const double total = cdf.back();
  for (double& c : cdf) c *= 2.0 * kPi / total;
  auto cumulative = [cdf, n](double t) {
    const double u = std::fmod(std::fmod(t, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi) * n / (2.0 * kPi);
    const auto i = std::min(static_cast<std::size_t>(u), static_cast<std::size_t>(n - 1));
    const double frac = u - static_cast<double>(i);
    return cdf[i] + frac * (cdf[i + 1] - cdf[i]);
  };
  d.f0 = ProfileFunction([f = d.f0, cumulative](double t) { return f(cumulative(t)); }, Parity::None);
  return d;
}

ProfileFunction correction_profile(cplx z, double s_star) {
  require(s_star > 0.5 && s_star < 1.0, ErrorKind::InvalidArgument, "s_star must lie in (1/2, 1)");
  if (z == cplx(0.0)) return ProfileFunction::zero();
  static const Plateau bump(kPi / 5, 4 * kPi / 5, 2 * kPi / 5, 3 * kPi / 5);
  static const double mass = 0.5 * circle_integral([](double t) { return bump(std::abs(wrap(t))); });
  const double c1 = z.real() / (2.0 * std::cos(s_star * kPi) * mass);
  const double c2 = z.imag() / (2.0 * std::sin(s_star * kPi) * mass);
  return {[c1, c2](double t) {
            const double w = wrap(t);
            const double b = bump(std::abs(w));
            return c1 * b + (w < 0.0 ? -c2 : c2) * b;
          },
          c2 == 0.0 ? Parity::Even : (c1 == 0.0 ? Parity::Odd : Parity::None)};
}

Vector lagrangian_state(const QuantumSpace& space, const LatitudeCircle& circle) {
  require(space.k() % circle.k0 == 0, ErrorKind::Divisibility, "k must be a multiple of k0");
  const long m = space.k() / circle.k0;
  Vector v = Vector::Zero(space.dim());
  v[static_cast<Eigen::Index>(m * circle.ell1())] = 1.0;
  return v;
}

Observable latitude_extension(const ProfileFunction& f, const Plateau& chi) {
  return Observable::autonomous("lagrangian-profile", [f, chi](const Vec3& x) {
    const double c = chi(x[2]);
    return c == 0.0 ? 0.0 : c * f(std::atan2(x[1], x[0]));
  });
}

LagrangianOverlap lagrangian_overlap(const QuantumSpace& space, const Vector& psi, const ProfileFunction& f,
                                     const Plateau& chi) {
  require(psi.size() == space.dim(), ErrorKind::DimensionMismatch, "state dimension does not match the space");
  const Observable F = latitude_extension(f, chi);
  const HermitianEig e = eig_hermitian(toeplitz(space, F));
  // exp(i T(F)) is the time-one propagator of -hbar T(F).
  const Matrix u = unitary_exp(e, -1.0);
  LagrangianOverlap r;
  r.overlap = psi.dot(u * psi) / psi.squaredNorm();
  r.ell_q = space.hbar() * std::max(std::abs(e.values[0]), std::abs(e.values[e.values.size() - 1]));
  r.f_max = uniform_norm(F);
  return r;
}

Plateau latitude_cutoff(const LatitudeCircle& circle, double half_band, double transition) {
  const double c = circle.cos_theta();
  const double a = c - half_band - transition, b = c + half_band + transition;
  require(a > -1.0 && b < 1.0, ErrorKind::InvalidArgument, "latitude cutoff reaches a pole");
  return Plateau(a, b, c - half_band, c + half_band);
}

void write_profile_csv(const std::filesystem::path& path, const ProfileFunction& f, int n) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string());
  out.precision(17);
  out << "theta,value\n";
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    out << t << ',' << f(t) << '\n';
  }
}

}  // namespace qsl

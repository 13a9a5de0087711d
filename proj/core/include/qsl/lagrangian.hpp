#pragma once

// Lagrangian states on latitude circles and their dislocation by
// longitude-dependent Hamiltonians of size hbar.

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "qsl/linalg.hpp"
#include "qsl/plateau.hpp"
#include "qsl/quantizer.hpp"

namespace qsl {

struct Rational {
  long num = 0;
  long den = 1;
  static Rational make(long num, long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// The circle {sin^2(theta/2) = t1}; t0 + t1 = 1.
struct LatitudeCircle {
  Rational t0, t1;
  long k0 = 1;  // smallest positive k0 with k0 t integral

  static LatitudeCircle make(Rational t0);
  double cos_theta() const { return t0.value() - t1.value(); }
  long ell0() const { return k0 * t0.num / t0.den; }
  long ell1() const { return k0 * t1.num / t1.den; }
};

enum class Parity { None, Even, Odd };

class ProfileFunction {
 public:
  ProfileFunction(std::function<double(double)> f, Parity parity);

  double operator()(double theta) const { return f_(theta); }
  Parity parity() const { return parity_; }
  // n equally spaced samples on [0, 2 pi).
  std::vector<double> samples(int n) const;

  static ProfileFunction zero();
  static ProfileFunction constant(double c);
  friend ProfileFunction operator+(const ProfileFunction& a, const ProfileFunction& b);
  friend ProfileFunction operator*(double c, const ProfileFunction& a);

 private:
  std::function<double(double)> f_;
  Parity parity_;
};

// Periodic trapezoid rule on [0, 2 pi).
double circle_integral(const std::function<double(double)>& f, int n = 8192);
cplx circle_integral_complex(const std::function<cplx(double)>& f, int n = 8192);

struct Dislocator {
  ProfileFunction f0;
  double s_star = 0.0;
  double bracket_lo = 0.0;  // I_{1/2}
  double bracket_hi = 0.0;  // I_1
};

// f0 with integral of e^{i f0} delta = 0. Without a density the uniform one is
// used and f0 is odd; otherwise f0 is the uniform profile composed with the
// normalized cumulative distribution of delta.
Dislocator dislocator_profile(double tol = 1e-10,
                              const std::optional<std::function<double(double)>>& density = std::nullopt);

// g with integral over the circle of e^{i f0} g = z.
ProfileFunction correction_profile(cplx z, double s_star);

// The normalized monomial of index m * ell1, for k = m * k0.
Vector lagrangian_state(const QuantumSpace& space, const LatitudeCircle& circle);

// F(x) = chi(x3) f(phi(x)).
Observable latitude_extension(const ProfileFunction& f, const Plateau& chi);

struct LagrangianOverlap {
  cplx overlap;       // <exp(i T(F)) Psi, Psi>
  double ell_q = 0.0;  // energy of -hbar T(F) over unit time
  double f_max = 0.0;  // max |F|
};

LagrangianOverlap lagrangian_overlap(const QuantumSpace& space, const Vector& psi, const ProfileFunction& f,
                                     const Plateau& chi);

// Band around the circle where the cutoff is 1, with transitions of the given width.
Plateau latitude_cutoff(const LatitudeCircle& circle, double half_band = 0.6, double transition = 0.3);

void write_profile_csv(const std::filesystem::path& path, const ProfileFunction& f, int n = 512);

}  // namespace qsl

#include "qsl/calibrate.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "qsl/error.hpp"
#include "qsl/observables.hpp"
#include "qsl/quantizer.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl {

namespace {

constexpr double kResidualFloor = 1e-10;

// f_t = c t x1: rotation about e1 by -c (t1^2 - t0^2).
Observable ramped_rotation(double c) {
  const Vec3 e1(1, 0, 0);
  return Observable::time_dependent(
             "ramp(" + std::to_string(c) + ")", [c](const Vec3& x, double t) { return c * t * x[0]; },
             [c, e1](const Vec3&, double t) { return (c * t * e1).eval(); })
      .with_exact_flow([c, e1](const Vec3& x, double t0, double t1) {
        return observables::rotate(x, e1, -c * (t1 * t1 - t0 * t0));
      });
}

Observable half_plus(int axis) {
  Vec3 a = Vec3::Zero();
  a[axis] = 1.0;
  return observables::axial(
      "(1+x" + std::to_string(axis + 1) + ")/2", a, [](double u) { return 0.5 * (1.0 + u); },
      [](double) { return 0.5; });
}

Observable square(int axis) {
  Vec3 a = Vec3::Zero();
  a[axis] = 1.0;
  return observables::axial(
      "x" + std::to_string(axis + 1) + "^2", a, [](double u) { return u * u; }, [](double u) { return 2.0 * u; });
}

Observable twist(const Vec3& axis, double c) {
  return observables::axial(
      "twist(" + std::to_string(c) + ")", axis, [c](double u) { return 0.5 * c * u * u; },
      [c](double u) { return c * u; });
}

struct Ratio {
  double value = 0.0;
  double residual = 0.0;
  std::string label;
};

struct Cell {
  std::vector<Ratio> alpha, beta, gamma;
};

}  // namespace

std::vector<GammaPair> theorem_battery() {
  const Vec3 ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
  return {
      {"equatorial-cap/half-turn", observables::cap_bump(ex, 0.0, 1.45), observables::longitude_rotation(kPi)},
      {"equatorial-cap/quarter-turn", observables::cap_bump(ex, 0.2, 1.4), observables::longitude_rotation(kPi / 2)},
      {"half-height/tilt", half_plus(2), observables::rotation_generator(ex, kPi / 2)},
      {"polar-cap/twist", observables::cap_bump(ez, 0.2, 1.3), twist(ex, kPi / 4)},
      {"square/oblique-turn", square(0), observables::rotation_generator(Vec3(1, 1, 1).normalized(), 1.0)},
      {"side-cap/ramp", observables::cap_bump(ey, 0.1, 1.3), ramped_rotation(1.5)},
  };
}

std::uint64_t CalibrationBattery::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& f : functions) mix("F:" + f.name());
  for (const auto& [f, g] : pairs) mix("P:" + f.name() + "|" + g.name());
  for (const auto& [f, g] : transports) mix("E:" + f.name() + "|" + g.name());
  return h;
}

CalibrationBattery default_battery() {
  CalibrationBattery b;
  const Observable x1 = observables::coordinate(0), x2 = observables::coordinate(1), x3 = observables::coordinate(2);
  b.functions = {x3, square(0), x1 * x2 + x3, observables::cap_bump(Vec3(0, 0, 1), 0.3, 1.2)};
  b.pairs = {{x1, x2}, {x3, x1 * x2}, {square(0), x3}, {x1 + x2, x3 * x3}};
  for (const auto& p : theorem_battery()) {
    const Observable moved = transport(p.g, p.f, 1.0).renamed(p.g.name() + "@" + p.f.name());
    const Observable prod = (p.g * moved).renamed(p.g.name() + "*" + moved.name());
    b.functions.push_back(p.g);
    b.functions.push_back(moved);
    b.functions.push_back(prod);
    b.pairs.emplace_back(p.g, moved);
    b.transports.emplace_back(p.f, p.g);
  }
  return b;
}

CalibrationRecord calibrate_constants(const std::vector<int>& ks, const CalibrationBattery& battery, double oversample,
                                      ThreadPool* pool) {
  require(!ks.empty(), ErrorKind::InvalidArgument, "calibration needs at least one k");
  require(!battery.functions.empty() || !battery.pairs.empty(), ErrorKind::InvalidArgument, "empty battery");

  // Seminorms do not depend on k.
  static const ProbeGrid grid = ProbeGrid::fibonacci(3000);
  std::map<std::string, CkNorms> norms;
  auto norms_of = [&](const Observable& f) -> const CkNorms& {
    auto it = norms.find(f.name());
    if (it == norms.end()) it = norms.emplace(f.name(), ck_norms(f, 3, grid)).first;
    return it->second;
  };
  for (const auto& f : battery.functions) norms_of(f);
  for (const auto& [f, g] : battery.pairs) {
    norms_of(f);
    norms_of(g);
  }
  std::vector<double> egorov_bound(battery.transports.size(), 0.0);

  auto run_cell = [&](std::size_t i) {
    const auto space = QuantumSpace::build(ks[i], oversample);
    const double h = space->hbar();
    Cell cell;
    for (const auto& f : battery.functions) {
      const double n2 = norms.at(f.name())[2];
      const double res = uniform_norm(f) - op_norm_hermitian(toeplitz(*space, f));
      if (n2 > 1e-8) cell.alpha.push_back({res / (h * n2), res, f.name()});
    }
    for (const auto& [f, g] : battery.pairs) {
      const CkNorms& nf = norms.at(f.name());
      const CkNorms& ng = norms.at(g.name());
      const Matrix tf = toeplitz(*space, f), tg = toeplitz(*space, g);
      const Matrix comm = (tf * tg - tg * tf) * cplx(0.0, -1.0 / h) - toeplitz(*space, poisson_bracket(f, g));
      const double n13 = pair_norm_13(nf, ng);
      const double r2 = op_norm(comm);
      if (n13 > 1e-8) cell.beta.push_back({r2 / (h * n13), r2, f.name() + "," + g.name()});
      const double n2 = pair_norm(nf, ng, 2);
      const double r3 = op_norm(toeplitz(*space, f * g) - tf * tg);
      if (n2 > 1e-8) cell.gamma.push_back({r3 / (h * n2), r3, f.name() + "," + g.name()});
    }
    for (std::size_t j = 0; j < battery.transports.size(); ++j) {
      const auto& [f, g] = battery.transports[j];
      EgorovOptions opts;
      opts.with_bound = false;
      const EgorovResult e = egorov_residual(space, f, g, kDefaultTimeSteps, opts);
      cell.beta.push_back({e.residual / h, e.residual, "egorov:" + f.name() + "," + g.name()});
    }
    return cell;
  };

  for (std::size_t j = 0; j < battery.transports.size(); ++j) {
    const auto& [f, g] = battery.transports[j];
    const auto space = QuantumSpace::build(ks.front(), oversample);
    egorov_bound[j] = egorov_residual(space, f, g, kDefaultTimeSteps).bound_integrand;
  }

  std::vector<Cell> cells;
  if (pool) {
    cells = pool->map(ks.size(), run_cell);
  } else {
    for (std::size_t i = 0; i < ks.size(); ++i) cells.push_back(run_cell(i));
  }

  CalibrationRecord rec;
  rec.ks = ks;
  rec.battery_hash = battery.hash();
  auto take = [](const std::vector<Ratio>& rs, double& best, std::string& label, bool& any) {
    for (const auto& r : rs) {
      if (r.residual <= kResidualFloor) continue;
      any = true;
      if (r.value > best) {
        best = r.value;
        label = r.label;
      }
    }
  };
  bool any_a = false, any_b = false, any_g = false;
  for (auto& c : cells) {
    // Egorov ratios are normalized by their bound integrand here.
    for (auto& r : c.beta) {
      if (r.label.rfind("egorov:", 0) != 0) continue;
      for (std::size_t j = 0; j < battery.transports.size(); ++j) {
        const auto& [f, g] = battery.transports[j];
        if (r.label == "egorov:" + f.name() + "," + g.name())
          r.value = egorov_bound[j] > 1e-8 ? r.value / egorov_bound[j] : 0.0;
      }
    }
    take(c.alpha, rec.max_ratio_alpha, rec.argmax_alpha, any_a);
    take(c.beta, rec.max_ratio_beta, rec.argmax_beta, any_b);
    take(c.gamma, rec.max_ratio_gamma, rec.argmax_gamma, any_g);
  }
  require(any_a && any_b && any_g, ErrorKind::CalibrationIndeterminate,
          "battery residuals are at the noise floor for at least one constant");
  rec.constants = {kCalibrationSafety * rec.max_ratio_alpha, kCalibrationSafety * rec.max_ratio_beta,
                   kCalibrationSafety * rec.max_ratio_gamma};
  return rec;
}

std::string format_calibration(const CalibrationRecord& r) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "alpha = " << r.constants.alpha << "  (max ratio " << r.max_ratio_alpha << " at " << r.argmax_alpha << ")\n";
  out << "beta  = " << r.constants.beta << "  (max ratio " << r.max_ratio_beta << " at " << r.argmax_beta << ")\n";
  out << "gamma = " << r.constants.gamma << "  (max ratio " << r.max_ratio_gamma << " at " << r.argmax_gamma << ")\n";
  out << "k =";
  for (int k : r.ks) out << ' ' << k;
  out << "\nbattery = " << std::hex << std::setw(16) << std::setfill('0') << r.battery_hash << '\n';
  return out.str();
}

}  // namespace qsl

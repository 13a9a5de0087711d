#include "qsl/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "experiments_impl.hpp"
#include "qsl/calibrate.hpp"
#include "qsl/error.hpp"
#include "qsl/thread_pool.hpp"

namespace qsl {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

void Table::add(std::vector<std::string> row) {
  require(row.size() == columns.size(), ErrorKind::InvalidArgument, "row width does not match table " + name);
  rows.push_back(std::move(row));
}

bool ExperimentResult::passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

Verdict& ExperimentResult::add_verdict(const Claim& claim, std::string metric, std::string comparator,
                                       double threshold, double measured, std::string note) {
  Verdict v;
  v.experiment = experiment;
  v.claim = claim.id;
  v.criterion = claim.criterion;
  v.metric = std::move(metric);
  v.comparator = std::move(comparator);
  v.threshold = threshold;
  v.measured = measured;
  v.note = std::move(note);
  if (v.comparator == ">=")
    v.pass = measured >= threshold;
  else if (v.comparator == "<=")
    v.pass = measured <= threshold;
  else
    fail(ErrorKind::InvalidArgument, "unknown comparator " + v.comparator);
  if (std::isnan(measured)) v.pass = false;
  verdicts.push_back(std::move(v));
  return verdicts.back();
}

Verdict& ExperimentResult::add_range_verdict(const Claim& claim, std::string metric, double lo, double hi,
                                             double measured, std::string note) {
  Verdict v;
  v.experiment = experiment;
  v.claim = claim.id;
  v.criterion = claim.criterion;
  v.metric = std::move(metric);
  v.comparator = "in";
  v.threshold = lo;
  v.threshold_hi = hi;
  v.measured = measured;
  v.pass = measured >= lo && measured <= hi;
  v.note = std::move(note);
  verdicts.push_back(std::move(v));
  return verdicts.back();
}

Verdict& ExperimentResult::add_check(const Claim& claim, std::string metric, bool ok, std::string note) {
  Verdict v;
  v.experiment = experiment;
  v.claim = claim.id;
  v.criterion = claim.criterion;
  v.metric = std::move(metric);
  v.comparator = "==";
  v.threshold = 1.0;
  v.measured = ok ? 1.0 : 0.0;
  v.pass = ok;
  v.note = std::move(note);
  verdicts.push_back(std::move(v));
  return verdicts.back();
}

const Claim& ExperimentInfo::claim(const std::string& claim_id) const {
  for (const auto& c : claims)
    if (c.id == claim_id) return c;
  fail(ErrorKind::InvalidArgument, "experiment " + id + " declares no claim " + claim_id);
}

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {
      "",
      "quantization identities",
      "semiclassical residual orders",
      "trace-norm sandwich and trace correspondence",
      "fidelity of quantized densities",
      "quantum speed limit and Uhlmann integral",
      "displacement implies dislocation",
      "two-sided overlap-ratio inequality",
      "certified displacement from dislocation",
      "grid superposition",
      "rescaled dislocation",
      "Lagrangian dislocation",
      "matrix inequalities",
  };
  return names;
}

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry = {
      {"quantization-axioms",
       "Identities of the CP1 quantization, residual orders and trace/fidelity asymptotics",
       {{"toeplitz-identity", 1, "T(1) is the identity"},
        {"rawnsley-constant", 1, "the Rawnsley function equals (k+1)/(2 pi)"},
        {"toeplitz-positivity", 1, "T(g) >= 0 for g >= 0"},
        {"garding-order", 2, "max f - |T(f)| is O(hbar)"},
        {"commutator-order", 2, "(-i/hbar)[T f, T g] - T{f,g} is O(hbar)"},
        {"product-order", 2, "T(fg) - T(f)T(g) is O(hbar)"},
        {"berezin-order", 2, "B(f) - f is O(hbar)"},
        {"trace-sandwich-lower", 3, "|f|_1 - C hbar <= 2 pi hbar |T(f)|_tr"},
        {"trace-sandwich-upper", 3, "2 pi hbar |T(f)|_tr <= |f|_1 (1 + C hbar)"},
        {"trace-correspondence", 3, "2 pi hbar tr T(f) = integral of f + O(hbar)"},
        {"fidelity-estimate", 4, "fidelity of quantized densities tends to the integral of sqrt(g1 g2)"}},
       detail::run_quantization_axioms},
      {"speed-limit",
       "Speed limit and Uhlmann integral on random paths; matrix inequalities on random pairs",
       {{"speed-limit-random", 5, "ell_q >= arccos(a) hbar on random paths"},
        {"uhlmann-lower", 5, "I >= arccos(a) hbar"},
        {"uhlmann-upper", 5, "I <= ell_q"},
        {"speed-limit-equality", 5, "a two-level flip attains ell_q = (pi/2) hbar with a = 0"},
        {"overlap-ratio-bound", 12, "Gamma_q <= Phi / sqrt(|theta| |sigma|)"},
        {"fidelity-upper-bound", 12, "Phi <= dim sqrt(|theta sigma|)"},
        {"pairing-bound", 12, "|tr sqrt(theta) sqrt(sigma)| <= Phi"},
        {"fidelity-symmetry", 12, "Phi(theta, sigma) = Phi(sigma, theta)"}},
       detail::run_speed_limit},
      {"cap-dislocation",
       "Equatorial cap state under a displacing rotation",
       {{"displacement-dislocation", 6, "fidelity decays faster than any power of hbar"},
        {"certified-displacement", 8, "dislocation in the o(hbar) regime certifies displacement of {u > lambda}"},
        {"energy-lower-bound", 8, "ell_q >= ell_cl - c hbar"},
        {"speed-limit-physical", 5, "ell_q >= arccos(a) hbar"}},
       detail::run_cap_dislocation},
      {"gamma-comparison",
       "Quantum and classical overlap ratios on the six-pair battery with calibrated constants",
       {{"overlap-ratio-lower", 7, "Gamma_q >= Gamma_cl - 3 b hbar"},
        {"overlap-ratio-upper", 7, "Gamma_q <= (Gamma_cl + 2 b hbar)/(1 - b hbar)^2"},
        {"energy-sandwich", 7, "ell_cl - c hbar <= ell_q <= ell_cl"},
        {"hypothesis-coverage", 7, "every pair has rows with b hbar < 1"}},
       detail::run_gamma_comparison},
      {"grid-superposition",
       "Coherent-state grid on a chart lattice: pairings and half-mesh translation",
       {{"grid-pairing-envelope", 9, "pairing residual is bounded by C1 s^N + C2 hbar + C3 (hbar/s^2)^(1+N)"},
        {"grid-disjoint-pairing", 9, "pairing against a disjoint g decays faster than any power"},
        {"grid-translation", 9, "half-mesh translation overlap decays in hbar/s^2"},
        {"speed-limit-physical", 5, "ell_q >= arccos(a) hbar"}},
       detail::run_grid_superposition},
      {"rescaled",
       "Rescaled Hamiltonian and state in a Darboux chart",
       {{"rescaled-power", 10, "s = hbar^(1/4): fidelity decays faster than any power"},
        {"rescaled-sqrt", 10, "s = r sqrt(hbar): dislocation at speed-limit energy"},
        {"rescaled-displacement", 10, "the rescaled superlevel set is displaced"},
        {"speed-limit-physical", 5, "ell_q >= arccos(a) hbar"}},
       detail::run_rescaled},
      {"lagrangian",
       "Lagrangian states on a latitude circle dislocated by longitude-dependent Hamiltonians",
       {{"dislocator-mean", 11, "the profile has vanishing mean of exp(i f0)"},
        {"lagrangian-order-zero", 11, "overlap is O(hbar) at order zero"},
        {"lagrangian-first-order", 11, "the first-order correction raises the decay order"},
        {"lagrangian-energy", 11, "driving energy is comparable to hbar max|F|"},
        {"speed-limit-physical", 5, "ell_q >= arccos(a) hbar"}},
       detail::run_lagrangian},
  };
  return registry;
}

const ExperimentInfo& find_experiment(const std::string& id) {
  for (const auto& e : experiment_registry())
    if (e.id == id) return e;
  fail(ErrorKind::UnknownExperiment, "unknown experiment '" + id + "'");
}

namespace detail {

const Claim& claim(const std::string& experiment, const std::string& id) {
  return find_experiment(experiment).claim(id);
}

Verdict& add_fit_verdict(ExperimentResult& r, const Claim& c, const std::string& metric, const DecayFit& fit,
                         double lo, double hi) {
  std::ostringstream note;
  note << "r2=" << format_number(fit.r2) << " window=[" << format_number(fit.x_min) << ","
       << format_number(fit.x_max) << "]";
  if (fit.clamped) note << " clamped=" << fit.clamped;
  Verdict& v = std::isinf(hi) ? r.add_verdict(c, metric, ">=", lo, fit.slope, note.str())
                              : r.add_range_verdict(c, metric, lo, hi, fit.slope, note.str());
  v.pass = v.pass && fit.r2 >= kMinR2;
  return v;
}

std::vector<int> int_list(const ExperimentConfig& cfg, const std::string& key, const std::vector<int>& fallback) {
  const auto it = cfg.selections.find(key);
  if (it == cfg.selections.end()) return fallback;
  std::vector<int> out;
  for (double v : parse_number_list(it->second)) {
    require(v == std::floor(v) && v >= 1, ErrorKind::ConfigValidation, cfg.id + ": " + key + " needs positive integers");
    out.push_back(static_cast<int>(v));
  }
  require(!out.empty(), ErrorKind::ConfigValidation, cfg.id + ": empty list for " + key);
  return out;
}

Table dislocation_table() {
  return {"dislocation",
          {"experiment", "k", "hbar", "fidelity", "ell_q", "ell_cl", "gamma_q", "gamma_cl", "b", "c", "slack_qsl",
           "slack_thm32_lo", "slack_thm32_hi", "seed"},
          {}};
}

Table sweep_table() {
  return {"sweeps",
          {"experiment", "k", "hbar", "s", "s2inv_hbar", "overlap", "fidelity", "ell_q", "displaced",
           "slope_window_id"},
          {}};
}

Table microprobe_table() { return {"microprobe", {"hbar", "mass", "region_id"}, {}}; }

void add_row(Table& t, const DislocationRow& r) {
  const double hbar = 1.0 / r.k;
  t.add({r.experiment, std::to_string(r.k), format_number(hbar), format_number(r.fidelity), format_number(r.ell_q),
         format_number(r.ell_cl), format_number(r.gamma_q), format_number(r.gamma_cl), format_number(r.b),
         format_number(r.c), format_number(r.slack_qsl), format_number(r.slack_lo), format_number(r.slack_hi),
         std::to_string(r.seed)});
}

void add_row(Table& t, const SweepRow& r) {
  const double hbar = 1.0 / r.k;
  const double x = std::isnan(r.s) ? std::nan("") : hbar / (r.s * r.s);
  t.add({r.experiment, std::to_string(r.k), format_number(hbar), format_number(r.s), format_number(x),
         format_number(r.overlap), format_number(r.fidelity), format_number(r.ell_q),
         r.displaced < 0 ? "" : format_bool(r.displaced != 0), r.window});
}

}  // namespace detail

namespace {

bool needs_constants(const std::string& id) { return id == "cap-dislocation" || id == "gamma-comparison"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line + "\n";
}

std::string threshold_text(const Verdict& v) {
  if (v.comparator == "in") return "[" + format_number(v.threshold) + ", " + format_number(v.threshold_hi) + "]";
  if (v.comparator == "==") return "true";
  return v.comparator + " " + format_number(v.threshold);
}

}  // namespace

void write_results(const std::filesystem::path& dir, const std::vector<ExperimentResult>& results) {
  std::filesystem::create_directories(dir / "plots");

  // Tables with the same name share one file, in experiment order.
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<std::string>, std::string>> files;
  for (const auto& r : results)
    for (const auto& t : r.tables) {
      auto it = files.find(t.name);
      if (it == files.end()) {
        order.push_back(t.name);
        it = files.emplace(t.name, std::make_pair(t.columns, csv_line(t.columns))).first;
      }
      require(it->second.first == t.columns, ErrorKind::InvalidArgument, "column mismatch in table " + t.name);
      for (const auto& row : t.rows) it->second.second += csv_line(row);
    }
  for (const auto& name : order) write_text(dir / (name + ".csv"), files.at(name).second);

  std::string verdicts = csv_line({"experiment", "claim", "criterion", "metric", "comparator", "threshold",
                                   "threshold_hi", "measured", "pass", "note"});
  for (const auto& r : results)
    for (const auto& v : r.verdicts)
      verdicts += csv_line({v.experiment, v.claim, std::to_string(v.criterion), v.metric, v.comparator,
                            format_number(v.threshold), v.comparator == "in" ? format_number(v.threshold_hi) : "",
                            format_number(v.measured), format_bool(v.pass), v.note});
  write_text(dir / "verdicts.csv", verdicts);

  for (const auto& r : results)
    for (const auto& p : r.plots) {
      std::string text = csv_line({p.x_label, p.y_label});
      for (const auto& [x, y] : p.points) text += csv_line({format_number(x), format_number(y)});
      write_text(dir / "plots" / (r.experiment + "_" + p.name + ".csv"), text);
    }

  std::ostringstream sum;
  for (const auto& r : results) {
    sum << "== " << r.experiment << (r.passed() ? "  PASS" : "  FAIL") << "\n";
    for (const auto& v : r.verdicts) {
      sum << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.claim << " (criterion " << v.criterion << ") "
          << v.metric << " = " << format_number(v.measured) << "  required " << threshold_text(v);
      if (!v.note.empty()) sum << "  " << v.note;
      sum << "\n";
    }
    for (const auto& line : r.log) sum << "  " << line << "\n";
  }
  write_text(dir / "summary.txt", sum.str());
}

SuiteOutcome run_suite(const SuiteConfig& suite, bool heavy) {
  for (const auto& e : suite.experiments) {
    e.validate();
    (void)find_experiment(e.id);
  }
  ThreadPool pool(resolve_thread_count(suite.threads));

  std::optional<QuantizationConstants> constants;
  std::string calibration_text;
  for (const auto& e : suite.experiments) {
    if (!needs_constants(e.id) || constants) continue;
    const auto ks = detail::int_list(e, "calibration_k", {32, 64, 128});
    const CalibrationRecord rec = calibrate_constants(ks, default_battery(), e.oversample, &pool);
    constants = rec.constants;
    calibration_text = format_calibration(rec);
  }

  SuiteOutcome out;
  for (const auto& e : suite.experiments) {
    ExperimentConfig cfg = e;
    if (heavy) cfg.heavy = true;
    RunContext ctx{cfg, &pool, constants};
    ExperimentResult r = find_experiment(cfg.id).run(ctx);
    r.experiment = cfg.id;
    for (auto& v : r.verdicts) v.experiment = cfg.id;
    for (const auto& v : r.verdicts)
      if (!v.pass) {
        out.all_pass = false;
        out.failed.push_back(v.experiment + "/" + v.claim + ": " + v.metric);
      }
    out.results.push_back(std::move(r));
  }
  write_results(suite.output_dir, out.results);
  if (!calibration_text.empty()) write_text(suite.output_dir / "calibration.txt", calibration_text);
  return out;
}

}  // namespace qsl

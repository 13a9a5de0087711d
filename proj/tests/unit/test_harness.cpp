#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qsl/calibrate.hpp"
#include "qsl/config.hpp"
#include "qsl/error.hpp"
#include "qsl/experiments.hpp"
#include "qsl/observables.hpp"
#include "qsl/report.hpp"

using namespace qsl;
namespace ob = qsl::observables;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidState;
}

}  // namespace

TEST_CASE("registry covers every acceptance criterion") {
  const auto& reg = experiment_registry();
  const std::set<std::string> expected = {"quantization-axioms", "speed-limit", "cap-dislocation", "gamma-comparison",
                                          "grid-superposition",  "rescaled",    "lagrangian"};
  std::set<std::string> ids;
  std::set<int> criteria;
  for (const auto& e : reg) {
    CHECK(ids.insert(e.id).second);
    CHECK(e.run);
    std::set<std::string> claims;
    for (const auto& c : e.claims) {
      CHECK(claims.insert(c.id).second);
      CHECK_FALSE(c.statement.empty());
      CHECK(c.criterion >= 1);
      CHECK(c.criterion <= 12);
      criteria.insert(c.criterion);
    }
  }
  CHECK(ids == expected);
  CHECK(criteria.size() == 12);
  CHECK(criterion_names().size() == 13);
  CHECK(kind_of([] { find_experiment("nope"); }) == ErrorKind::UnknownExperiment);
}

TEST_CASE("report on an empty directory is a missing-inputs error") {
  const fs::path dir = fresh_dir("qsl_report_empty");
  CHECK(kind_of([&] { emit_report(dir); }) == ErrorKind::MissingInputs);
  std::ofstream(dir / "verdicts.csv") << "experiment,claim,criterion,metric,comparator,threshold,threshold_hi,measured,"
                                          "pass,note\n";
  CHECK(kind_of([&] { emit_report(dir); }) == ErrorKind::MissingInputs);
}

TEST_CASE("suite runs are deterministic and verdicts reference registered claims") {
  const std::string text =
      "schema = 1\nseed = 11\nk = 4, 8\n"
      "[speed-limit]\ntolerance.runs = 20\ntolerance.max_dim = 6\ntolerance.matrix_trials = 30\n"
      "tolerance.matrix_max_dim = 8\n";
  const fs::path a = fresh_dir("qsl_det_a"), b = fresh_dir("qsl_det_b");
  SuiteConfig s = parse_suite(text);
  s.threads = 2;
  s.output_dir = a;
  const SuiteOutcome out = run_suite(s);
  s.output_dir = b;
  run_suite(s);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel), rel.string());
  }

  const Report rep = emit_report(a);
  CHECK(rep.verdicts.size() == out.results.front().verdicts.size());
  for (const auto& v : rep.verdicts) CHECK_NOTHROW(find_experiment(v.experiment).claim(v.claim));
  CHECK(fs::exists(a / "report.txt"));
  CHECK(fs::exists(a / "criteria.csv"));
  int covered = 0;
  for (const auto& c : rep.criteria) covered += c.claims > 0;
  CHECK(covered == 2);
}

TEST_CASE("empty k list is rejected before any run") {
  CHECK(kind_of([] { parse_suite("schema = 1\nseed = 1\nk =\n[speed-limit]\n"); }) == ErrorKind::ConfigValidation);
}

TEST_CASE("calibration of constants-only functions is indeterminate") {
  CalibrationBattery battery;
  battery.functions = {ob::constant(1.0), ob::constant(2.0)};
  battery.pairs = {{ob::constant(1.0), ob::constant(3.0)}};
  battery.transports = {{ob::constant(1.0), ob::constant(1.0)}};
  CHECK(kind_of([&] { calibrate_constants({8, 16}, battery); }) == ErrorKind::CalibrationIndeterminate);
}

TEST_CASE("product constant is invariant under doubling the pair") {
  CalibrationBattery one, two;
  one.functions = two.functions = {ob::coordinate(2)};
  one.transports = two.transports = {{ob::height(), ob::coordinate(0)}};
  one.pairs = {{ob::coordinate(0), ob::coordinate(0)}};
  two.pairs = {{2.0 * ob::coordinate(0), 2.0 * ob::coordinate(0)}};
  const double g1 = calibrate_constants({8, 16}, one).constants.gamma;
  const double g2 = calibrate_constants({8, 16}, two).constants.gamma;
  CHECK(g1 > 0.0);
  CHECK(g2 == doctest::Approx(g1).epsilon(1e-9));
}

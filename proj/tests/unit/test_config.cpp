#include "doctest.h"
#include "qsl/config.hpp"
#include "qsl/error.hpp"

using namespace qsl;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_suite(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidState;
}

}  // namespace

TEST_CASE("suite config with defaults and overrides") {
  const SuiteConfig s = parse_suite(
      "schema = 1\nseed = 3\nk = 8, 16\noutput = out\n"
      "[speed-limit]\ntolerance.runs = 5\n"
      "[rescaled]\nk = 16, 32, 64, 128\nstate = chart-bump(0.45, 0, 0.02, 0.08)\n");
  REQUIRE(s.experiments.size() == 2);
  CHECK(s.output_dir == "out");
  CHECK(s.experiments[0].ks == std::vector<int>{8, 16});
  CHECK(*s.experiments[0].seed == 3);
  CHECK(s.experiments[0].tolerance("runs", 0) == 5);
  CHECK(s.experiments[1].ks.size() == 4);
  CHECK(s.experiments[1].selection("state", "") == "chart-bump(0.45, 0, 0.02, 0.08)");
}

TEST_CASE("config validation errors") {
  CHECK(kind_of("seed = 1\nk = 8\n[speed-limit]\n") == ErrorKind::ConfigValidation);
  CHECK(kind_of("schema = 1\nseed = 1\nk =\n[speed-limit]\n") == ErrorKind::ConfigValidation);
  CHECK(kind_of("schema = 1\nseed = 1\nk = 16, 8\n[speed-limit]\n") == ErrorKind::ConfigValidation);
  CHECK(kind_of("schema = 1\nk = 8, 16\n[speed-limit]\n") == ErrorKind::ConfigValidation);
  CHECK(kind_of("schema = 2\nseed = 1\nk = 8\n[speed-limit]\n") == ErrorKind::ConfigValidation);
  CHECK(kind_of("schema = 1\nseed = 1\nk = 8\n[a]\n[a]\n") == ErrorKind::ConfigValidation);
}

TEST_CASE("s rules") {
  CHECK(parse_s_rule("power:0.25")(1.0 / 16) == doctest::Approx(0.5));
  CHECK(parse_s_rule("sqrt:6")(0.01) == doctest::Approx(0.6));
  CHECK(parse_s_rule("fixed:0.3")(0.01) == doctest::Approx(0.3));
  CHECK_THROWS_AS(parse_s_rule("power:0.7"), Error);
  CHECK_THROWS_AS(parse_s_rule("cube:1"), Error);
}

TEST_CASE("observable names") {
  const Vec3 x(0.6, 0.0, 0.8);
  CHECK(parse_observable("x3")(x) == doctest::Approx(0.8));
  CHECK(parse_observable("cap(1, 0, 0, 0.3, 1.54)")(Vec3(1, 0, 0)) == doctest::Approx(1.0));
  CHECK(parse_observable("rotation(0, 0, 1, pi)").exact_flow() != nullptr);
  CHECK_THROWS_AS(parse_observable("wobble(1)"), Error);
  CHECK_THROWS_AS(parse_observable("cap(1, 0)"), Error);
}

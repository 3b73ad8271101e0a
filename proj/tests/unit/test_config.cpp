#include <doctest.h>

#include <string>

#include "mstop/config.hpp"
#include "mstop/error.hpp"
#include "mstop/value_table.hpp"

using namespace mstop;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("full LDA config") {
  const RunConfig c = parse_config(R"({
    "model": "lda",
    "frequency": {"rate": 3}, "severity": {"mu": 2, "lambda": 3},
    "policy": {"kind": "ALP", "param": 10}, "objective": "global",
    "horizon": {"T": 8, "k": 3}, "mc": {"samples": 5000, "seed": 9}
  })");
  CHECK(c.lda.frequency.rate == 3.0);
  CHECK(c.lda.severity.mu == 2.0);
  CHECK(c.policy.kind == PolicyKind::ALP);
  CHECK(c.policy.objective == Objective::Global);
  CHECK(c.mc_samples == 5000);
  CHECK(c.mc_seed == 9);
  const GainModelPtr m = build_gain_model(c);
  CHECK(m->regime() == Regime::Global);
}

TEST_CASE("ILP local reads the auxiliary process") {
  const RunConfig c = parse_config(R"({"frequency": {"rate": 4}, "severity": {"mu": 1, "lambda": 3},
                                       "policy": {"kind": "ILP", "param": 1}})");
  const ValueTable t = compute_value_table(*build_gain_model(c), c.horizon);
  CHECK(t.at(1, 1) == doctest::Approx(-4.0));
}

TEST_CASE("log-normal preset") {
  const RunConfig c = lognormal_preset();
  CHECK(c.horizon.T == 10);
  CHECK(c.horizon.k == 9);
  const ValueTable t = compute_value_table(*build_gain_model(c), c.horizon);
  CHECK(t.at(10, 9) == doctest::Approx(-11.78).epsilon(0.01 / 11.78));
  const RunConfig g = parse_config(R"({"model": "lognormal", "objective": "global"})");
  CHECK_THROWS_AS(build_gain_model(g), ConfigError);
}

TEST_CASE("errors name the offending field") {
  CHECK(error_of(R"({"frequency": {"rate": -1}, "severity": {"mu": 1, "lambda": 1},
                     "policy": {"kind": "ALP", "param": 1}})")
            .find("/frequency/rate") != std::string::npos);
  CHECK(error_of(R"({"frequency": {"rate": 1}, "severity": {"mu": 1, "lambda": 1},
                     "policy": {"kind": "XYZ", "param": 1}})")
            .find("/policy/kind") != std::string::npos);
  CHECK(error_of(R"({"model": "lognormal", "horizon": {"T": 3, "k": 3}})").find("/horizon") != std::string::npos);
  CHECK(error_of(R"({"frequency": {"rate": 3}, "severity": {"mu": 1, "lambda": 1}, "truncation": {"m_max": 4},
                     "policy": {"kind": "ALP", "param": 1}})")
            .find("/truncation/m_max") != std::string::npos);
  CHECK(error_of(R"({"frequency": {"rate": 1}, "severity": {"mu": 1, "lambda": 1}})").find("/policy") !=
        std::string::npos);
  CHECK(error_of(R"({"model": "lognormal", "approx": {"source": "magic"}})").find("/approx/source") !=
        std::string::npos);
  CHECK(error_of("{\n  \"model\": \n  ,}").find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("approx sources") {
  const RunConfig c = parse_config(
      R"({"model": "lognormal", "approx": {"source": "moments", "mean": 2, "variance": 1.5, "mu3": 5, "mu4": 37}})");
  REQUIRE(c.approx);
  CHECK(c.approx->kind == ApproxSource::Kind::Moments);
  CHECK(c.approx->moments.mu4 == 37.0);
  const RunConfig g = parse_config(R"({"model": "lognormal", "approx": {"source": "gamma", "shape": 2, "rate": 3}})");
  CHECK(g.approx->kind == ApproxSource::Kind::Gamma);
  CHECK(g.approx->gamma_rate == 3.0);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mstop/error.hpp"
#include "mstop/reference_models.hpp"
#include "mstop/stopping_rule.hpp"
#include "mstop/value_table.hpp"
#include "oracles.hpp"

using namespace mstop;

TEST_CASE("log-normal local model") {
  const auto m = lognormal_local_model(0.0, 1.0);
  CHECK(m->mean_gain() == doctest::Approx(-std::exp(0.5)).epsilon(1e-14));
  CHECK(m->expected_max(0.0, -1.65) == doctest::Approx(-1.02).epsilon(0.01 / 1.02));
  CHECK(m->expected_max(0.0, kForced) == m->mean_gain());
  const ValueTable t = compute_value_table(*m, {7, 4});
  CHECK(t.at(1, 1) == doctest::Approx(-1.65).epsilon(0.01 / 1.65));
  CHECK(t.at(7, 4) == doctest::Approx(-3.32).epsilon(0.01 / 3.32));
}

TEST_CASE("forced diagonal is a sum of means") {
  const auto m = lognormal_local_model(0.3, 0.6);
  const ValueTable t = compute_value_table(*m, {9, 8});
  for (int l = 1; l <= 8; ++l) CHECK(t.at(l, l) == doctest::Approx(l * m->mean_gain()).epsilon(1e-13));
  CHECK(t.at(5, 0) == 0.0);
  CHECK_FALSE(t.defined(3, 4));
  CHECK_THROWS(t.at(3, 4));
}

TEST_CASE("value function monotonicity") {
  // More years help; with negative gains each extra claim costs.
  const auto m = lognormal_local_model(0.0, 1.0);
  const ValueTable t = compute_value_table(*m, {10, 9});
  for (int L = 2; L <= 10; ++L) {
    for (int l = 1; l <= std::min(L - 1, 9); ++l) {
      CHECK(t.at(L, l) >= t.at(L - 1, l) - 1e-12);
      if (l + 1 <= std::min(L, 9)) CHECK(t.at(L, l + 1) <= t.at(L, l) + 1e-12);
    }
  }
}

TEST_CASE("recursion matches a scenario tree on random discrete laws") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v{u(gen), u(gen), u(gen)};
    std::vector<double> p{0.2 + std::abs(u(gen)), 0.2 + std::abs(u(gen)), 0.2 + std::abs(u(gen))};
    const double s = p[0] + p[1] + p[2];
    for (auto& x : p) x /= s;
    const DiscreteGainModel model(v, p);
    const int T = 2 + rep % 5;
    const int k = 1 + rep % std::min(3, T - 1);
    const ValueTable t = compute_value_table(model, {T, k});
    CHECK(t.game_value() == doctest::Approx(oracle::exhaustive_game_value(v, p, T, k)).epsilon(1e-12));
  }
}

TEST_CASE("horizon validation") {
  const auto m = lognormal_local_model(0.0, 1.0);
  CHECK_THROWS_AS(compute_value_table(*m, {3, 3}), ConfigError);
  CHECK_THROWS_AS(compute_value_table(*m, {3, 0}), ConfigError);
}

TEST_CASE("thresholds") {
  const auto m = lognormal_local_model(0.0, 1.0);
  const ValueTable t = compute_value_table(*m, {7, 4});
  const Thresholds th(t);
  CHECK(th.at_year(1, 1) == doctest::Approx(t.at(6, 4) - t.at(6, 3)));
  CHECK(th.at_year(1, 1) == doctest::Approx(-1.53).epsilon(0.01 / 1.53));
  // Last right in an interior year: v^{T-m,1}.
  CHECK(th.at_year(4, 4) == doctest::Approx(t.at(3, 1)));
  // m_i = T - k + i is forced.
  for (int i = 1; i <= 4; ++i) CHECK(th.at_year(7 - 4 + i, i) == kForced);
}

TEST_CASE("decide: ties claim, forced states claim") {
  const auto m = lognormal_local_model(0.0, 1.0);
  const Thresholds th(compute_value_table(*m, {7, 4}));
  const double b = th.at_year(1, 1);
  CHECK(decide(th, {1, 0}, b) == Decision::Claim);
  CHECK(decide(th, {1, 0}, std::nextafter(b, -1e9)) == Decision::Wait);
  CHECK(decide(th, {4, 0}, -1e9) == Decision::Claim);
  CHECK(active_threshold(th, {4, 0}) == kForced);
  CHECK_THROWS(active_threshold(th, {5, 0}));
}

TEST_CASE("worked sequence") {
  const auto m = lognormal_local_model(0.0, 1.0);
  const ValueTable t = compute_value_table(*m, {7, 4});
  const StoppingResult r = run_rule({-0.57, -0.79, -4.75, -1.07, -1.14, -5.56, -1.59}, t);
  CHECK(r.taus == std::vector<int>{1, 2, 4, 7});
  CHECK(r.realized_gain == doctest::Approx(-4.02).epsilon(1e-12));
}

TEST_CASE("equal gains claim at once; single right picks a dominant first year") {
  const auto m = lognormal_local_model(0.0, 1.0);
  const ValueTable t = compute_value_table(*m, {8, 3});
  CHECK(run_rule(std::vector<double>(8, 0.0), t).taus == std::vector<int>{1, 2, 3});
  CHECK(run_rule(std::vector<double>(8, -20.0), t).taus == std::vector<int>{6, 7, 8});

  const ValueTable t1 = compute_value_table(*m, {6, 1});
  std::vector<double> w{-0.1, -3.0, -2.0, -5.0, -0.9, -4.0};
  REQUIRE(w[0] >= t1.at(5, 1));
  const auto r = run_rule(w, t1);
  CHECK(r.taus == std::vector<int>{1});
  CHECK(r.realized_gain == *std::max_element(w.begin(), w.end()));
}

TEST_CASE("rule attains the value on every discrete path average") {
  const std::vector<double> v{-2.0, -1.0, 0.5};
  const std::vector<double> p{0.3, 0.3, 0.4};
  const DiscreteGainModel model(v, p);
  const ValueTable t = compute_value_table(model, {5, 2});
  const Thresholds th(t);
  const double e = oracle::enumerate_expected_gain(
      v, p, 5, [&](const std::vector<double>& path) { return run_rule(path, th).realized_gain; });
  CHECK(e == doctest::Approx(t.game_value()).epsilon(1e-13));
}

TEST_CASE("gain model regime contract") {
  const auto m = lognormal_local_model(0.0, 1.0);
  CHECK_THROWS_AS(m->expected_max(1.0, 0.0), std::domain_error);  // local needs c2 <= c1 <= 0
  CHECK_NOTHROW(m->expected_max(1e-12, 0.0));                       // tolerance clamp
}

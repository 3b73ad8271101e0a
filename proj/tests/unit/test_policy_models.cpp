#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/random.hpp"
#include "mstop/simulation.hpp"
#include "oracles.hpp"

using namespace mstop;

namespace {

bool within(double closed, const oracle::Estimate& mc) {
  return std::abs(closed - mc.value) <= 3.0 * mc.stderr_ + 1e-9 * (1.0 + std::abs(mc.value));
}

const LDAModel kALP = make_lda({3.0}, {2.0, 3.0});

}  // namespace

TEST_CASE("truncation is checked") {
  CHECK_THROWS_AS(make_lda({3.0}, {1.0, 1.0}, 5), ConfigError);
  CHECK(make_lda({3.0}, {1.0, 1.0}).m_max >= 13);
  CHECK_THROWS(make_lda({3.0}, {-1.0, 1.0}));
}

TEST_CASE("ALP local") {
  const ALPLocalModel wide(kALP, 1e4);
  CHECK(wide.mean_gain() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(wide.atoms().front().second == doctest::Approx(1.0).epsilon(1e-9));

  const ALPLocalModel m(kALP, 10.0);
  const auto years = oracle::simulate_years(kALP, {PolicyKind::ALP, 10.0, Objective::Local}, 1000000, 31);
  std::vector<double> over(years.z.size());
  for (std::size_t i = 0; i < over.size(); ++i) over[i] = years.z[i] > 10.0 ? 1.0 : 0.0;
  CHECK(within(m.exceedance_probability(), oracle::sample_mean(over)));

  const auto w = oracle::simulate_gains(kALP, {PolicyKind::ALP, 10.0, Objective::Local}, 1000000, 32);
  CHECK(within(m.mean_gain(), oracle::sample_mean(w)));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double c1 = -4.0 * u(gen);
    const double c2 = c1 - 6.0 * u(gen);
    CHECK(within(m.expected_max(c1, c2), oracle::expected_max(w, c1, c2)));
  }
}

TEST_CASE("ALP global") {
  CHECK(ALPGlobalModel(kALP, 1e4).mean_gain() == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(ALPGlobalModel(kALP, 0.0).mean_gain() == doctest::Approx(0.0));
  const PolicySpec pol{PolicyKind::ALP, 10.0, Objective::Global};
  const auto years = oracle::simulate_years(kALP, pol, 100000, 33);
  for (std::size_t i = 0; i < years.z.size(); ++i) {
    REQUIRE(years.z[i] - years.ztilde[i] == doctest::Approx(std::min(10.0, years.z[i])).epsilon(1e-12));
  }
}

TEST_CASE("mean consistency between objectives") {
  for (double cap : {2.0, 10.0}) {
    CHECK(ALPGlobalModel(kALP, cap).mean_gain() - ALPLocalModel(kALP, cap).mean_gain() ==
          doctest::Approx(kALP.mean_loss()).epsilon(1e-6));
  }
  const LDAModel lda = make_lda({3.0}, {1.0, 1.0});
  for (double p : {0.5, 3.0}) {
    CHECK(PAPGlobalModel(lda, p).mean_gain() - PAPLocalModel(lda, p).mean_gain() ==
          doctest::Approx(lda.mean_loss()).epsilon(1e-6));
  }
}

TEST_CASE("policy level monotonicity") {
  double prev = -1e9;
  for (double cap : {0.5, 2.0, 5.0, 10.0, 20.0}) {
    const double m = ALPLocalModel(kALP, cap).mean_gain();
    CHECK(m > prev);
    prev = m;
  }
  const LDAModel lda = make_lda({3.0}, {1.0, 1.0});
  prev = 1e9;
  for (double p : {0.5, 1.0, 3.0, 6.0}) {
    const double m = PAPLocalModel(lda, p).mean_gain();
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("first-passage index") {
  const LDAModel lda = make_lda({3.0}, {1.0, 1.0});
  CHECK(mstar_pmf(1, lda, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  double s = ig_cdf(3.0, ig_sum_params(5, lda.severity));
  for (int m = 1; m <= 5; ++m) s += mstar_pmf(m, lda, 3.0);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  // Frozen Monte Carlo count over 10^6 sequences: 0.128617, stderr 0.000335.
  CHECK(std::abs(mstar_pmf(2, lda, 3.0) - 0.128617) <= 3.0 * 0.000335);
}

TEST_CASE("PAP local") {
  const LDAModel lda = make_lda({3.0}, {1.0, 1.0});
  CHECK(PAPLocalModel(lda, 1e3).mean_gain() == doctest::Approx(-3.0).epsilon(1e-8));
  const PAPLocalModel m(lda, 3.0);
  const auto w = oracle::simulate_gains(lda, {PolicyKind::PAP, 3.0, Objective::Local}, 1000000, 34);
  CHECK(within(m.mean_gain(), oracle::sample_mean(w)));
  for (double c2 : {-1.0, -2.0, -5.0}) {
    std::vector<double> mins(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mins[i] = -std::min(-w[i], -c2);
    CHECK(within(m.expected_max(0.0, c2), oracle::sample_mean(mins)));
  }
}

TEST_CASE("PAP global") {
  const LDAModel lda = make_lda({3.0}, {1.0, 1.0});
  CHECK(PAPGlobalModel(lda, 0.0).mean_gain() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(PAPGlobalModel(lda, 1e3).mean_gain() == doctest::Approx(0.0).epsilon(1e-9));
  const PAPGlobalModel m(lda, 3.0);
  CHECK(m.cdf(-1.0) == 0.0);
  CHECK(m.cdf(0.0) == doctest::Approx(m.atom_at_zero()));
  CHECK(m.cdf(80.0) == doctest::Approx(1.0).epsilon(1e-9));

  // Pathwise: the insurer pays every loss after the running sum crosses.
  const PolicySpec pol{PolicyKind::PAP, 3.0, Objective::Global};
  RngStream rng(35, 0);
  for (int y = 0; y < 100000; ++y) {
    std::vector<double> x(static_cast<std::size_t>(rng.poisson(3.0)));
    for (auto& v : x) v = sample_ig(lda.severity, rng);
    double z = 0.0, s = 0.0, paid = 0.0;
    for (double v : x) {
      z += v;
      s += v;
      if (s > 3.0) paid += v;
    }
    REQUIRE(z - insured_loss(x, pol) == doctest::Approx(paid).epsilon(1e-12));
  }
}

TEST_CASE("ILP local") {
  const ILPLocalModel m({4.0, {1.0, 3.0}});
  CHECK(m.mean_gain() == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(m.expected_max(0.0, -std::numeric_limits<double>::infinity()) == doctest::Approx(-4.0));
  const ILPAuxModel aux{4.0, {1.0, 3.0}};
  const auto w = oracle::simulate_gains(kALP, {PolicyKind::ILP, 1.0, Objective::Local}, 1000000, 36, &aux);
  CHECK(within(m.expected_max(-1.0, -3.0), oracle::expected_max(w, -1.0, -3.0)));
}

TEST_CASE("ILP global sample") {
  const std::size_t M = 100000;
  const EmpiricalGainModel wide(ilp_global_sample(kALP, 1e9, M, 1));
  CHECK(std::abs(wide.mean_gain() - 6.0) <= 3.0 * wide.mean_stderr());

  const EmpiricalGainModel tiny(ilp_global_sample(kALP, 1e-12, M, 2));
  for (double d : tiny.sorted_draws()) CHECK_LE(d, 1e-10);

  const EmpiricalGainModel m(ilp_global_sample(kALP, 4.0, M, 3));
  CHECK(m.size() == M);
  for (double d : m.sorted_draws()) REQUIRE(d >= 0.0);
  CHECK(m.expected_max(0.0, 0.0) == doctest::Approx(m.mean_gain()).epsilon(1e-12));
  CHECK(m.expected_max(2.5, 2.5) == doctest::Approx(2.5 + m.mean_gain()).epsilon(1e-12));
  const auto e = m.expected_max_with_error(1.0, 5.0);
  const auto direct = oracle::expected_max(m.sample().draws, 1.0, 5.0);
  CHECK(e.value == doctest::Approx(direct.value).epsilon(1e-12));
  CHECK(e.stderr_ == doctest::Approx(direct.stderr_).epsilon(1e-6));
}

TEST_CASE("ILP global sample agrees with the pathwise simulation") {
  const auto s = ilp_global_sample(kALP, 0.5, 20000, 9);
  const auto w = oracle::simulate_gains(kALP, {PolicyKind::ILP, 0.5, Objective::Global}, 20000, 10);
  const EmpiricalGainModel m(s);
  const auto mc = oracle::sample_mean(w);
  CHECK(std::abs(m.mean_gain() - mc.value) <= 3.0 * std::hypot(mc.stderr_, m.mean_stderr()));
}

TEST_CASE("dispatch") {
  const ILPAuxModel aux{4.0, {1.0, 3.0}};
  CHECK(make_gain_model(kALP, {PolicyKind::ALP, 10.0, Objective::Local})->regime() == Regime::Local);
  CHECK(make_gain_model(kALP, {PolicyKind::PAP, 3.0, Objective::Global})->regime() == Regime::Global);
  CHECK_THROWS_AS(make_gain_model(kALP, {PolicyKind::ILP, 1.0, Objective::Local}), ConfigError);
  CHECK(make_gain_model(kALP, {PolicyKind::ILP, 1.0, Objective::Local}, &aux)->mean_gain() ==
        doctest::Approx(-4.0));
  CHECK_THROWS(make_gain_model(kALP, {PolicyKind::ALP, -1.0, Objective::Local}));
}

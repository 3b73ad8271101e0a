#include "mstop/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/random.hpp"
#include "mstop/stopping_rule.hpp"

namespace mstop {
namespace {

constexpr double kUpperOnePercent = 2.3263478740408408;  // Phi^{-1}(0.99)
constexpr std::uint64_t kRandomRuleSalt = 0x9E3779B97F4A7C15ULL;

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

std::vector<int> random_years(int T, int k, RngStream& rng) {
  std::vector<int> years(static_cast<std::size_t>(T));
  std::iota(years.begin(), years.end(), 1);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, T - 1);
    std::swap(years[static_cast<std::size_t>(i)], years[static_cast<std::size_t>(pick(rng.engine()))]);
  }
  years.resize(static_cast<std::size_t>(k));
  std::sort(years.begin(), years.end());
  return years;
}

// Claim whenever w >= level, but never miss a forced year.
std::vector<int> level_rule(const std::vector<double>& gains, int k, double level) {
  const int T = static_cast<int>(gains.size());
  std::vector<int> years;
  for (int m = 1; m <= T && static_cast<int>(years.size()) < k; ++m) {
    const int left = k - static_cast<int>(years.size());
    const bool forced = left >= T - m + 1;
    if (forced || gains[static_cast<std::size_t>(m - 1)] >= level) years.push_back(m);
  }
  return years;
}

}  // namespace

double ScenarioBatch::gain(std::size_t path, int year, Objective objective) const {
  return objective == Objective::Local ? -ztilde(path, year) : z(path, year) - ztilde(path, year);
}

std::vector<double> ScenarioBatch::gain_path(std::size_t path, Objective objective) const {
  std::vector<double> out(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) out[static_cast<std::size_t>(t - 1)] = gain(path, t, objective);
  return out;
}

double insured_loss(const std::vector<double>& x, const PolicySpec& policy) {
  switch (policy.kind) {
    case PolicyKind::ALP: {
      const double z = std::accumulate(x.begin(), x.end(), 0.0);
      return std::max(z - policy.param, 0.0);
    }
    case PolicyKind::PAP: {
      double running = 0.0;
      double kept = 0.0;
      for (double v : x) {
        running += v;
        if (running <= policy.param) kept += v;
      }
      return kept;
    }
    case PolicyKind::ILP: {
      double kept = 0.0;
      for (double v : x) kept += std::max(v - policy.param, 0.0);
      return kept;
    }
  }
  return 0.0;
}

ScenarioBatch simulate_batch(const LDAModel& lda, const PolicySpec& policy, int T, std::size_t M,
                             std::uint64_t seed, const ILPAuxModel* ilp_aux, unsigned workers) {
  policy.validate();
  if (T < 1 || M < 1) throw ConfigError("simulate_batch needs T >= 1 and M >= 1");
  ScenarioBatch batch;
  batch.T = T;
  batch.M = M;
  batch.seed = seed;
  batch.policy = policy;
  batch.Z.assign(M * static_cast<std::size_t>(T), 0.0);
  batch.Ztilde.assign(M * static_cast<std::size_t>(T), 0.0);
  const bool auxiliary = policy.kind == PolicyKind::ILP && ilp_aux != nullptr;
  parallel_for(M, workers, [&](std::size_t path) {
    RngStream rng(seed, path);
    std::vector<double> x;
    for (int t = 0; t < T; ++t) {
      const std::size_t cell = path * static_cast<std::size_t>(T) + static_cast<std::size_t>(t);
      if (auxiliary) {
        const int n = rng.poisson(ilp_aux->aux_rate);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += sample_ig(ilp_aux->aux_severity, rng);
        batch.Z[cell] = s;
        batch.Ztilde[cell] = s;
        continue;
      }
      const int n = rng.poisson(lda.frequency.rate);
      x.resize(static_cast<std::size_t>(n));
      for (auto& v : x) v = sample_ig(lda.severity, rng);
      batch.Z[cell] = std::accumulate(x.begin(), x.end(), 0.0);
      batch.Ztilde[cell] = insured_loss(x, policy);
    }
  });
  return batch;
}

std::string ComparisonRule::name() const {
  switch (kind) {
    case Kind::Optimal: return "optimal";
    case Kind::Random: return "random";
    case Kind::Average: return "average";
    case Kind::Deterministic: {
      std::string s = "deterministic(";
      for (std::size_t i = 0; i < years.size(); ++i) s += (i ? "," : "") + std::to_string(years[i]);
      return s + ")";
    }
  }
  return "?";
}

std::vector<ComparisonRule> standard_rules() {
  return {ComparisonRule::optimal(), ComparisonRule::deterministic({1, 5, 8}), ComparisonRule::random(),
          ComparisonRule::average()};
}

double reference_line(const ValueTable& table, double annual_mean_loss, Objective objective) {
  if (objective == Objective::Global) return annual_mean_loss * table.T() - table.game_value();
  return -table.game_value();
}

RuleReport compare_rules(const ScenarioBatch& batch, Objective objective, const ValueTable& table,
                         const std::vector<ComparisonRule>& rules, double annual_mean_loss, int histogram_bins) {
  if (table.T() != batch.T) throw ConfigError("batch and value table disagree on T");
  if (rules.empty()) throw ConfigError("compare_rules needs at least one rule");
  const int T = batch.T;
  const int k = table.k();
  for (const auto& r : rules) {
    if (r.kind != ComparisonRule::Kind::Deterministic) continue;
    if (static_cast<int>(r.years.size()) != k || !std::is_sorted(r.years.begin(), r.years.end()) ||
        std::adjacent_find(r.years.begin(), r.years.end()) != r.years.end() || r.years.front() < 1 ||
        r.years.back() > T) {
      throw ConfigError("deterministic rule years must be k strictly increasing years in 1..T");
    }
  }
  const Thresholds th(table);
  const double average_level = table.at(1, 1);

  RuleReport report;
  report.objective = objective;
  report.game_value = table.game_value();
  report.reference_line = reference_line(table, annual_mean_loss, objective);
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const ComparisonRule& rule = rules[ri];
    RuleSummary s;
    s.name = rule.name();
    s.values.resize(batch.M);
    s.claims.resize(batch.M);
    for (std::size_t p = 0; p < batch.M; ++p) {
      const std::vector<double> gains = batch.gain_path(p, objective);
      std::vector<int> years;
      switch (rule.kind) {
        case ComparisonRule::Kind::Optimal: years = run_rule(gains, th).taus; break;
        case ComparisonRule::Kind::Deterministic: years = rule.years; break;
        case ComparisonRule::Kind::Random: {
          RngStream rng(batch.seed ^ kRandomRuleSalt, p);
          years = random_years(T, k, rng);
          break;
        }
        case ComparisonRule::Kind::Average: years = level_rule(gains, k, average_level); break;
      }
      double value = 0.0;
      if (objective == Objective::Global) {
        for (int t = 1; t <= T; ++t) value += batch.z(p, t);
        for (int y : years) value -= gains[static_cast<std::size_t>(y - 1)];
      } else {
        for (int y : years) value += batch.ztilde(p, y);
      }
      s.values[p] = value;
      s.claims[p] = std::move(years);
    }
    std::tie(s.mean, s.stderr_) = mean_and_stderr(s.values);
    report.rules.push_back(std::move(s));
  }

  // Shared histogram range across rules.
  double lo = report.rules[0].values[0];
  double hi = lo;
  for (const auto& s : report.rules) {
    const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
    lo = std::min(lo, *mn);
    hi = std::max(hi, *mx);
  }
  if (hi <= lo) hi = lo + 1.0;
  for (auto& s : report.rules) {
    s.histogram = {lo, hi, std::vector<std::size_t>(static_cast<std::size_t>(histogram_bins), 0)};
    for (double v : s.values) {
      auto bin = static_cast<std::size_t>((v - lo) / (hi - lo) * histogram_bins);
      s.histogram.counts[std::min(bin, static_cast<std::size_t>(histogram_bins - 1))]++;
    }
  }

  const auto& opt = report.rules[0];
  report.optimal_beats_all = true;
  for (std::size_t ri = 1; ri < report.rules.size(); ++ri) {
    const auto& other = report.rules[ri];
    std::vector<double> diff(batch.M);
    for (std::size_t p = 0; p < batch.M; ++p) diff[p] = other.values[p] - opt.values[p];
    PairedTest t;
    t.rule = other.name;
    std::tie(t.mean_difference, t.stderr_) = mean_and_stderr(diff);
    t.z = t.stderr_ > 0.0 ? t.mean_difference / t.stderr_ : (t.mean_difference > 0.0 ? INFINITY : 0.0);
    t.optimal_better = t.z > kUpperOnePercent;
    report.optimal_beats_all = report.optimal_beats_all && t.optimal_better;
    report.tests.push_back(t);
  }
  return report;
}

std::map<std::vector<int>, double> stopping_time_distribution(const ScenarioBatch& batch, Objective objective,
                                                              const ValueTable& table) {
  const Thresholds th(table);
  std::map<std::vector<int>, double> freq;
  for (std::size_t p = 0; p < batch.M; ++p) freq[run_rule(batch.gain_path(p, objective), th).taus] += 1.0;
  for (auto& [key, v] : freq) v /= static_cast<double>(batch.M);
  return freq;
}

ProxyEstimate price_proxy(const ScenarioBatch& batch, const ValueTable& table) {
  const Thresholds th(table);
  std::vector<double> gains(batch.M);
  for (std::size_t p = 0; p < batch.M; ++p) {
    gains[p] = run_rule(batch.gain_path(p, Objective::Global), th).realized_gain;
  }
  const auto [mean, se] = mean_and_stderr(gains);
  return {std::max(mean, 0.0), se};
}

double exceedance_frequency(const ScenarioBatch& batch, double level) {
  const auto n = std::count_if(batch.Z.begin(), batch.Z.end(), [level](double z) { return z > level; });
  return static_cast<double>(n) / static_cast<double>(batch.Z.size());
}

std::vector<std::string> preset_names() { return {"alp-study", "pap-study", "ilp-study"}; }

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  if (name == "alp-study") {
    p.lda = make_lda({3.0}, {2.0, 3.0});
    p.policy = {PolicyKind::ALP, 10.0, Objective::Local};
    p.objectives = {Objective::Local, Objective::Global};
    p.M = 50000;
  } else if (name == "pap-study") {
    p.lda = make_lda({3.0}, {1.0, 1.0});
    p.policy = {PolicyKind::PAP, 3.0, Objective::Local};
    p.objectives = {Objective::Local, Objective::Global};
    p.M = 10000;
  } else if (name == "ilp-study") {
    // Auxiliary post-insurance process: N~ ~ Poisson(4), X~ ~ IG(mu = 1, lambda = 3).
    p.ilp_aux = ILPAuxModel{4.0, {1.0, 3.0}};
    p.lda = make_lda({4.0}, {1.0, 3.0});
    p.policy = {PolicyKind::ILP, 1.0, Objective::Local};
    p.objectives = {Objective::Local};
    p.M = 10000;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected alp-study, pap-study or ilp-study)");
  }
  return p;
}

ExperimentResult run_experiment(const ExperimentPreset& preset) {
  ExperimentResult result;
  result.preset = preset;
  const ILPAuxModel* aux = preset.ilp_aux ? &*preset.ilp_aux : nullptr;
  const ScenarioBatch batch = simulate_batch(preset.lda, preset.policy, preset.horizon.T, preset.M, preset.seed, aux);
  result.exceedance = exceedance_frequency(batch, preset.policy.param);
  const double annual_mean = aux ? aux->aux_rate * aux->aux_severity.mu : preset.lda.mean_loss();
  for (Objective obj : preset.objectives) {
    PolicySpec spec = preset.policy;
    spec.objective = obj;
    const GainModelPtr model = make_gain_model(preset.lda, spec, aux, 100000, preset.seed);
    ObjectiveResult r{obj, compute_value_table(*model, preset.horizon), {}, {}, std::nullopt};
    r.report = compare_rules(batch, obj, r.table, standard_rules(), annual_mean);
    r.triples = stopping_time_distribution(batch, obj, r.table);
    if (obj == Objective::Global) r.proxy = price_proxy(batch, r.table);
    result.objectives.push_back(std::move(r));
  }
  return result;
}

}  // namespace mstop

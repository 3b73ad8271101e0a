#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mstop/lda.hpp"
#include "mstop/value_table.hpp"

namespace mstop {

// M simulated T-year paths of the raw annual loss Z and the insured loss
// Z~ (what the holder still pays in a claim year), row-major [path][year].
struct ScenarioBatch {
  int T = 0;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  PolicySpec policy;
  std::vector<double> Z;
  std::vector<double> Ztilde;

  double z(std::size_t path, int year) const { return Z[path * T + static_cast<std::size_t>(year - 1)]; }
  double ztilde(std::size_t path, int year) const {
    return Ztilde[path * T + static_cast<std::size_t>(year - 1)];
  }
  // W = -Z~ (local) or Z - Z~ (global).
  double gain(std::size_t path, int year, Objective objective) const;
  std::vector<double> gain_path(std::size_t path, Objective objective) const;
};

// One independent stream per path; parallel over paths with a
// deterministic result for a given seed. For the ILP policy with an
// auxiliary model the insured loss is drawn from it and Z is set to Z~.
ScenarioBatch simulate_batch(const LDAModel& lda, const PolicySpec& policy, int T, std::size_t M,
                             std::uint64_t seed, const ILPAuxModel* ilp_aux = nullptr,
                             unsigned workers = 0);

// Insured annual loss of one year, straight from the policy definitions.
double insured_loss(const std::vector<double>& severities, const PolicySpec& policy);

struct ComparisonRule {
  enum class Kind { Optimal, Deterministic, Random, Average };
  Kind kind = Kind::Optimal;
  std::vector<int> years;  // Deterministic only

  static ComparisonRule optimal() { return {Kind::Optimal, {}}; }
  static ComparisonRule deterministic(std::vector<int> years) { return {Kind::Deterministic, std::move(years)}; }
  static ComparisonRule random() { return {Kind::Random, {}}; }
  static ComparisonRule average() { return {Kind::Average, {}}; }
  std::string name() const;
};

// Optimal, Deterministic(1,5,8), Random, Average.
std::vector<ComparisonRule> standard_rules();

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

struct RuleSummary {
  std::string name;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> values;  // per-path objective (a loss; lower is better)
  std::vector<std::vector<int>> claims;  // per-path claim years
  Histogram histogram;
};

// Paired one-sided test that the optimal rule has a lower mean loss.
struct PairedTest {
  std::string rule;
  double mean_difference = 0.0;  // other - optimal
  double stderr_ = 0.0;
  double z = 0.0;
  bool optimal_better = false;  // z > upper 1% normal quantile
};

struct RuleReport {
  Objective objective = Objective::Local;
  std::vector<RuleSummary> rules;
  std::vector<PairedTest> tests;  // against the first (optimal) rule
  double game_value = 0.0;        // v^{T,k}
  double reference_line = 0.0;    // expected objective of the optimal rule
  bool optimal_beats_all = false;
};

// Objective per path: global sum_t Z(t) - sum_i W(tau_i); local sum_i Z~(tau_i).
RuleReport compare_rules(const ScenarioBatch& batch, Objective objective, const ValueTable& table,
                         const std::vector<ComparisonRule>& rules, double annual_mean_loss,
                         int histogram_bins = 50);

// Global: E[Z] T - v^{T,k}. Local: -v^{T,k}, the expected insured loss at
// the claims (v itself is in gain units, W = -Z~).
double reference_line(const ValueTable& table, double annual_mean_loss, Objective objective);

// Empirical pmf of the optimal claim-year tuples.
std::map<std::vector<int>, double> stopping_time_distribution(const ScenarioBatch& batch, Objective objective,
                                                              const ValueTable& table);

struct ProxyEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Mean of sum_i W(tau_i) under the optimal rule, global objective.
ProxyEstimate price_proxy(const ScenarioBatch& batch, const ValueTable& table);

// Fraction of simulated years with Z > level.
double exceedance_frequency(const ScenarioBatch& batch, double level);

// ---------------------------------------------------------------- presets

struct ExperimentPreset {
  std::string name;
  LDAModel lda;
  PolicySpec policy;  // objective field unused; see objectives
  std::vector<Objective> objectives;
  std::optional<ILPAuxModel> ilp_aux;
  Horizon horizon{8, 3};
  std::size_t M = 10000;
  std::uint64_t seed = 20240501;
};

std::vector<std::string> preset_names();
// alp-study, pap-study, ilp-study. Unknown names are a ConfigError.
ExperimentPreset make_preset(const std::string& name);

struct ObjectiveResult {
  Objective objective;
  ValueTable table;
  RuleReport report;
  std::map<std::vector<int>, double> triples;
  std::optional<ProxyEstimate> proxy;  // global only
};

struct ExperimentResult {
  ExperimentPreset preset;
  double exceedance = 0.0;  // fraction of years with Z > policy level (ALP)
  std::vector<ObjectiveResult> objectives;
};

ExperimentResult run_experiment(const ExperimentPreset& preset);

}  // namespace mstop

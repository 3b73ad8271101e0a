#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mstop/distributions.hpp"

namespace mstop {

// Annual loss Z = X_1 + ... + X_N, N ~ Poisson(rate), X ~ IG(mu, lambda).
// Series over N are truncated at m_max.
struct LDAModel {
  FrequencyModel frequency;
  IGParams severity;
  int m_max = 0;

  double mean_loss() const { return frequency.rate * severity.mu; }
};

// Validates the parameters and fills in (or checks) the truncation point.
// A requested m_max whose Poisson tail is >= 1e-10 is a ConfigError.
LDAModel make_lda(FrequencyModel frequency, IGParams severity,
                  std::optional<int> m_max = std::nullopt);

// Post-insurance loss process for the individual-loss policy, local
// objective: Z~ = X~_1 + ... + X~_{N~}, N~ ~ Poisson(aux_rate), X~ ~ IG.
struct ILPAuxModel {
  double aux_rate = 1.0;
  IGParams aux_severity;
};

enum class PolicyKind { ILP, ALP, PAP };
enum class Objective { Local, Global };

struct PolicySpec {
  PolicyKind kind = PolicyKind::ALP;
  double param = 1.0;  // TCL, cap, or attachment point
  Objective objective = Objective::Local;
  void validate() const;
};

std::string to_string(PolicyKind kind);
std::string to_string(Objective objective);
PolicyKind parse_policy_kind(const std::string& text);
Objective parse_objective(const std::string& text);

// Compound sums of IG severities: F_m, H_m (partial expectation) and the
// stop-loss transform Phi_m(y) = E[(y - S_m)^+], with S_0 = 0.
class IGSums {
 public:
  explicit IGSums(IGParams severity);

  double cdf(int m, double x) const;
  double sf(int m, double x) const;
  double pdf(int m, double x) const;
  double partial_expectation(int m, double x) const;
  double stop_loss(int m, double y) const;
  const IGParams& severity() const { return severity_; }

 private:
  IGParams severity_;
};

// E[(y - S_N)^+] = sum_m p_m Phi_m(y) for the given count pmf.
double compound_lower_partial(const IGSums& sums, const std::vector<double>& pmf, double y);

}  // namespace mstop

#include "mstop/lda.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mstop/error.hpp"

namespace mstop {

LDAModel make_lda(FrequencyModel frequency, IGParams severity, std::optional<int> m_max) {
  try {
    frequency.validate();
    severity.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  LDAModel lda{frequency, severity, 0};
  const int needed = poisson_truncation(frequency);
  if (m_max) {
    if (*m_max < 1 || poisson_tail(*m_max, frequency) >= 1e-10) {
      std::ostringstream msg;
      msg << "truncation m_max=" << *m_max << " leaves Poisson tail "
          << poisson_tail(*m_max, frequency) << " >= 1e-10 (need m_max >= " << needed << ")";
      throw ConfigError(msg.str());
    }
    lda.m_max = *m_max;
  } else {
    lda.m_max = needed;
  }
  return lda;
}

void PolicySpec::validate() const {
  if (!(param > 0.0) || !std::isfinite(param)) {
    throw ConfigError("policy parameter must be a positive finite number");
  }
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ILP: return "ILP";
    case PolicyKind::ALP: return "ALP";
    case PolicyKind::PAP: return "PAP";
  }
  return "?";
}

std::string to_string(Objective objective) {
  return objective == Objective::Local ? "local" : "global";
}

PolicyKind parse_policy_kind(const std::string& text) {
  if (text == "ILP" || text == "ilp") return PolicyKind::ILP;
  if (text == "ALP" || text == "alp") return PolicyKind::ALP;
  if (text == "PAP" || text == "pap") return PolicyKind::PAP;
  throw ConfigError("unknown policy kind '" + text + "' (expected ILP, ALP or PAP)");
}

Objective parse_objective(const std::string& text) {
  if (text == "local" || text == "Local") return Objective::Local;
  if (text == "global" || text == "Global") return Objective::Global;
  throw ConfigError("unknown objective '" + text + "' (expected local or global)");
}

IGSums::IGSums(IGParams severity) : severity_(severity) { severity_.validate(); }

double IGSums::cdf(int m, double x) const {
  if (m == 0) return x >= 0.0 ? 1.0 : 0.0;
  return ig_cdf(std::max(x, 0.0), ig_sum_params(m, severity_));
}

double IGSums::sf(int m, double x) const {
  if (m == 0) return x >= 0.0 ? 0.0 : 1.0;
  return ig_sf(std::max(x, 0.0), ig_sum_params(m, severity_));
}

double IGSums::pdf(int m, double x) const {
  return ig_density(x, ig_sum_params(m, severity_));
}

double IGSums::partial_expectation(int m, double x) const {
  if (m == 0 || !(x > 0.0)) return 0.0;
  return ig_partial_expectation(x, m, severity_);
}

double IGSums::stop_loss(int m, double y) const {
  if (!(y > 0.0)) return 0.0;
  if (m == 0) return y;
  return std::max(0.0, y * cdf(m, y) - partial_expectation(m, y));
}

double compound_lower_partial(const IGSums& sums, const std::vector<double>& pmf, double y) {
  double s = 0.0;
  for (std::size_t m = 0; m < pmf.size(); ++m) s += pmf[m] * sums.stop_loss(static_cast<int>(m), y);
  return s;
}

}  // namespace mstop

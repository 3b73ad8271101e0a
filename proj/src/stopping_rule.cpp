#include "mstop/stopping_rule.hpp"

#include <sstream>
#include <stdexcept>

namespace mstop {

double active_threshold(const Thresholds& th, const StoppingState& state) {
  const int i = state.rights_used + 1;
  if (state.year < 1 || state.year > th.T() || state.rights_used < 0 || i > th.k() ||
      th.k() - state.rights_used > th.T() - state.year + 1) {
    std::ostringstream msg;
    msg << "infeasible stopping state (year=" << state.year
        << ", rights_used=" << state.rights_used << ")";
    throw std::logic_error(msg.str());
  }
  return th.at_year(state.year, i);
}

Decision decide(const Thresholds& th, const StoppingState& state, double w) {
  return w >= active_threshold(th, state) ? Decision::Claim : Decision::Wait;
}

StoppingResult run_rule(const std::vector<double>& gains, const Thresholds& th) {
  if (static_cast<int>(gains.size()) != th.T()) {
    throw std::invalid_argument("run_rule: gain path length differs from T");
  }
  StoppingResult result;
  StoppingState state;
  for (int m = 1; m <= th.T() && state.rights_used < th.k(); ++m) {
    state.year = m;
    const double w = gains[static_cast<std::size_t>(m - 1)];
    if (decide(th, state, w) == Decision::Claim) {
      result.taus.push_back(m);
      result.realized_gain += w;
      ++state.rights_used;
    }
  }
  return result;
}

StoppingResult run_rule(const std::vector<double>& gains, const ValueTable& table) {
  return run_rule(gains, Thresholds(table));
}

}  // namespace mstop

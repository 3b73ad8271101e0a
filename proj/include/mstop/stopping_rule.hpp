#pragma once

#include <vector>

#include "mstop/value_table.hpp"

namespace mstop {

enum class Decision { Claim, Wait };

// Where an online session stands: current year t (1-based) and rights used.
struct StoppingState {
  int year = 1;
  int rights_used = 0;
};

struct StoppingResult {
  std::vector<int> taus;  // 1-based claim years, strictly increasing
  double realized_gain = 0.0;
};

// Claim iff w >= threshold (ties claim); forced years always claim.
// Throws std::logic_error for an infeasible state.
Decision decide(const Thresholds& th, const StoppingState& state, double w);

// Threshold that decide() compares against in this state.
double active_threshold(const Thresholds& th, const StoppingState& state);

// Apply decide() along a full path of T gains.
StoppingResult run_rule(const std::vector<double>& gains, const Thresholds& th);
StoppingResult run_rule(const std::vector<double>& gains, const ValueTable& table);

}  // namespace mstop

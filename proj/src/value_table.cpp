#include "mstop/value_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mstop/error.hpp"

namespace mstop {

void Horizon::validate() const {
  if (k < 1 || T <= k) {
    std::ostringstream msg;
    msg << "horizon requires 1 <= k < T (got T=" << T << ", k=" << k << ")";
    throw ConfigError(msg.str());
  }
}

ValueTable::ValueTable(Horizon horizon) : horizon_(horizon) {
  horizon_.validate();
  values_.assign(static_cast<std::size_t>(horizon_.T) * horizon_.k,
                 std::numeric_limits<double>::quiet_NaN());
}

bool ValueTable::defined(int L, int l) const {
  return L >= 0 && L <= horizon_.T && l >= 0 && l <= horizon_.k && l <= L;
}

std::size_t ValueTable::index(int L, int l) const {
  return static_cast<std::size_t>(L - 1) * horizon_.k + static_cast<std::size_t>(l - 1);
}

double ValueTable::at(int L, int l) const {
  if (!defined(L, l)) {
    std::ostringstream msg;
    msg << "value table cell (L=" << L << ", l=" << l << ") is not defined";
    throw std::out_of_range(msg.str());
  }
  if (l == 0) return 0.0;
  return values_[index(L, l)];
}

void ValueTable::set(int L, int l, double value) {
  if (!defined(L, l) || l == 0) throw std::out_of_range("value table cell not settable");
  values_[index(L, l)] = value;
}

void ValueTable::write_csv(std::ostream& out, int precision) const {
  std::ostringstream buf;
  buf.precision(precision);
  buf << "L";
  for (int l = 1; l <= horizon_.k; ++l) buf << ",l=" << l;
  buf << '\n';
  for (int L = 1; L <= horizon_.T; ++L) {
    buf << L;
    for (int l = 1; l <= horizon_.k; ++l) {
      buf << ',';
      if (l <= L) buf << at(L, l);
    }
    buf << '\n';
  }
  out << buf.str();
}

ValueTable compute_value_table(const GainModel& model, Horizon horizon) {
  ValueTable table(horizon);
  const double mean = model.mean_gain();
  if (!std::isfinite(mean)) throw NumericalError("gain model returned a non-finite mean");
  for (int L = 1; L <= horizon.T; ++L) {
    for (int l = 1; l <= std::min(L, horizon.k); ++l) {
      double v = 0.0;
      if (l == L) {
        v = table.at(L - 1, l - 1) + mean;
      } else {
        try {
          v = model.expected_max(table.at(L - 1, l - 1), table.at(L - 1, l));
        } catch (const NumericalError& e) {
          std::ostringstream msg;
          msg << "value table cell (L=" << L << ", l=" << l << "): " << e.what();
          throw NumericalError(msg.str());
        }
      }
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "value table cell (L=" << L << ", l=" << l << ") is not finite";
        throw NumericalError(msg.str());
      }
      table.set(L, l, v);
    }
  }
  return table;
}

Thresholds::Thresholds(const ValueTable& table) : T_(table.T()), k_(table.k()) {
  b_.assign(static_cast<std::size_t>(T_) * k_, 0.0);
  feasible_.assign(b_.size(), false);
  for (int L = 0; L < T_; ++L) {
    for (int i = 1; i <= k_; ++i) {
      const int remaining = k_ - i + 1;  // rights left including this one
      const std::size_t idx = static_cast<std::size_t>(L) * k_ + (i - 1);
      if (remaining > L + 1) continue;  // cannot be reached by a feasible path
      feasible_[idx] = true;
      if (remaining > L) {
        b_[idx] = kForced;
      } else {
        b_[idx] = table.at(L, remaining) - table.at(L, remaining - 1);
      }
    }
  }
}

double Thresholds::at(int L, int i) const {
  if (L < 0 || L >= T_ || i < 1 || i > k_) throw std::out_of_range("threshold index");
  const std::size_t idx = static_cast<std::size_t>(L) * k_ + (i - 1);
  if (!feasible_[idx]) throw std::logic_error("infeasible stopping state");
  return b_[idx];
}

double Thresholds::at_year(int m, int i) const { return at(T_ - m, i); }

void Thresholds::write_csv(std::ostream& out, int precision) const {
  std::ostringstream buf;
  buf.precision(precision);
  buf << "year";
  for (int i = 1; i <= k_; ++i) buf << ",right=" << i;
  buf << '\n';
  for (int m = 1; m <= T_; ++m) {
    buf << m;
    for (int i = 1; i <= k_; ++i) {
      buf << ',';
      const std::size_t idx = static_cast<std::size_t>(T_ - m) * k_ + (i - 1);
      // Right i cannot be in play before year i.
      if (!feasible_[idx] || i > m) continue;
      if (b_[idx] == kForced) {
        buf << "forced";
      } else {
        buf << b_[idx];
      }
    }
    buf << '\n';
  }
  out << buf.str();
}

Thresholds thresholds(const ValueTable& table) { return Thresholds(table); }

}  // namespace mstop

#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "mstop/gain_model.hpp"

namespace mstop {

struct Horizon {
  int T = 1;
  int k = 1;
  void validate() const;  // 1 <= k < T, else ConfigError
};

// v^{L,l}: best expected total gain with L years left and l claims to make.
// Stored for 1 <= l <= min(L, k); v^{L,0} = 0.
class ValueTable {
 public:
  ValueTable() = default;
  explicit ValueTable(Horizon horizon);

  const Horizon& horizon() const { return horizon_; }
  int T() const { return horizon_.T; }
  int k() const { return horizon_.k; }

  bool defined(int L, int l) const;
  double at(int L, int l) const;  // l == 0 gives 0; undefined cells throw
  void set(int L, int l, double value);

  // v^{T,k}
  double game_value() const { return at(horizon_.T, horizon_.k); }

  // Rows L = 1..T, columns l = 1..k, blank where l > L.
  void write_csv(std::ostream& out, int precision = 10) const;

 private:
  std::size_t index(int L, int l) const;
  Horizon horizon_;
  std::vector<double> values_;
};

// Backward recursion:
//   v^{l,l}     = v^{l-1,l-1} + E[W]
//   v^{L,l}     = E[max{v^{L-1,l-1} + W, v^{L-1,l}}]   for l < L
ValueTable compute_value_table(const GainModel& model, Horizon horizon);

constexpr double kForced = -std::numeric_limits<double>::infinity();

// Claim thresholds b(L, i) = v^{L,k-i+1} - v^{L,k-i} where L = T - m is the
// number of years left after year m and i is the right about to be used.
// When the remaining rights fill the remaining years the threshold is -inf.
class Thresholds {
 public:
  explicit Thresholds(const ValueTable& table);

  // Threshold for using right i (1-based) in year m (1-based).
  double at_year(int m, int i) const;
  // Same indexed by years left after the current one.
  double at(int L, int i) const;
  int T() const { return T_; }
  int k() const { return k_; }

  // Rows m = 1..T, columns i = 1..k; "forced" for -inf, blank if infeasible.
  void write_csv(std::ostream& out, int precision = 10) const;

 private:
  int T_;
  int k_;
  std::vector<double> b_;  // (L = 0..T-1) x (i = 1..k)
  std::vector<bool> feasible_;
};

Thresholds thresholds(const ValueTable& table);

}  // namespace mstop

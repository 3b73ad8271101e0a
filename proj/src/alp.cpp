#include <algorithm>
#include <cmath>
#include <string>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"

namespace mstop {
namespace {

void check_level(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(what) + " must be a nonnegative finite number");
  }
}

}  // namespace

ALPLocalModel::ALPLocalModel(const LDAModel& lda, double cap)
    : lda_(lda), cap_(cap), sums_(lda.severity), pmf_(poisson_pmf_table(lda.frequency, lda.m_max)) {
  check_level(cap, "ALP cap");
  weights_.C0 = pmf_[0];
  weights_.Cm.resize(static_cast<std::size_t>(lda_.m_max));
  mean_loss_ = 0.0;
  for (int m = 1; m <= lda_.m_max; ++m) {
    const double p = pmf_[static_cast<std::size_t>(m)];
    const double sf = sums_.sf(m, cap_);
    weights_.C0 += p * sums_.cdf(m, cap_);
    weights_.Cm[static_cast<std::size_t>(m - 1)] = p * sf;
    // E[(S_m - cap)^+] = m mu P_{+1/2}[S > cap] - cap P[S_m > cap]
    const double upper_mean = m * lda_.severity.mu - sums_.partial_expectation(m, cap_);
    mean_loss_ += p * std::max(0.0, upper_mean - cap_ * sf);
  }
}

double ALPLocalModel::mean_loss() const { return mean_loss_; }

// E[(delta - Z~)^+] = delta C0 + sum_m p_m E[(delta + cap - S_m); cap < S_m < cap + delta]
double ALPLocalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const double hi = cap_ + delta;
  double s = delta * weights_.C0;
  for (int m = 1; m <= lda_.m_max; ++m) {
    const double p = pmf_[static_cast<std::size_t>(m)];
    const double mass = sums_.cdf(m, hi) - sums_.cdf(m, cap_);
    const double part = sums_.partial_expectation(m, hi) - sums_.partial_expectation(m, cap_);
    s += p * std::max(0.0, hi * mass - part);
  }
  return s;
}

Atoms ALPLocalModel::atoms() const { return {{0.0, weights_.C0}}; }

double ALPLocalModel::density(double z) const {
  if (!(z > 0.0)) return 0.0;
  double s = 0.0;
  for (int m = 1; m <= lda_.m_max; ++m) s += pmf_[static_cast<std::size_t>(m)] * sums_.pdf(m, z + cap_);
  return s;
}

ALPGlobalModel::ALPGlobalModel(const LDAModel& lda, double cap)
    : lda_(lda), cap_(cap), sums_(lda.severity), pmf_(poisson_pmf_table(lda.frequency, lda.m_max)) {
  check_level(cap, "ALP cap");
  mean_ = 0.0;
  atom_cap_ = 0.0;
  for (int m = 1; m <= lda_.m_max; ++m) {
    const double p = pmf_[static_cast<std::size_t>(m)];
    const double sf = sums_.sf(m, cap_);
    atom_cap_ += p * sf;
    mean_ += p * (cap_ * sf + sums_.partial_expectation(m, cap_));
  }
}

// W <= cap, so for delta >= cap the claim never pays more than waiting.
double ALPGlobalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  if (delta >= cap_) return delta - mean_;
  return compound_lower_partial(sums_, pmf_, delta);
}

Atoms ALPGlobalModel::atoms() const { return {{0.0, pmf_[0]}, {cap_, atom_cap_}}; }

double ALPGlobalModel::density(double w) const {
  if (!(w > 0.0) || !(w < cap_)) return 0.0;
  double s = 0.0;
  for (int m = 1; m <= lda_.m_max; ++m) s += pmf_[static_cast<std::size_t>(m)] * sums_.pdf(m, w);
  return s;
}

}  // namespace mstop

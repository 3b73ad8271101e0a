#include <algorithm>
#include <cmath>
#include <limits>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"
#include "mstop/random.hpp"

namespace mstop {

ILPLocalModel::ILPLocalModel(const ILPAuxModel& aux) : aux_(aux), sums_(aux.aux_severity) {
  const LDAModel lda = make_lda({aux.aux_rate}, aux.aux_severity);
  pmf_ = poisson_pmf_table(lda.frequency, lda.m_max);
}

double ILPLocalModel::mean_loss() const { return aux_.aux_rate * aux_.aux_severity.mu; }

double ILPLocalModel::lower_partial(double delta) const {
  return compound_lower_partial(sums_, pmf_, delta);
}

Atoms ILPLocalModel::atoms() const { return {{0.0, pmf_[0]}}; }

double ILPLocalModel::density(double z) const {
  double s = 0.0;
  for (std::size_t m = 1; m < pmf_.size(); ++m) s += pmf_[m] * sums_.pdf(static_cast<int>(m), z);
  return s;
}

EmpiricalGainSample ilp_global_sample(const LDAModel& lda, double tcl, std::size_t M,
                                      std::uint64_t seed) {
  if (M < 1) throw ConfigError("ILP global sample size must be >= 1");
  if (!(tcl >= 0.0)) throw ConfigError("ILP TCL must be nonnegative");
  EmpiricalGainSample out;
  out.seed = seed;
  out.tcl = tcl;
  out.draws.resize(M);
  // Fixed-size chunks get their own stream so the sample does not depend on
  // how the work is split.
  constexpr std::size_t kChunk = 4096;
  for (std::size_t start = 0; start < M; start += kChunk) {
    RngStream rng(seed, start / kChunk);
    const std::size_t stop = std::min(M, start + kChunk);
    for (std::size_t i = start; i < stop; ++i) {
      const int n = rng.poisson(lda.frequency.rate);
      double w = 0.0;
      for (int j = 0; j < n; ++j) w += std::min(sample_ig(lda.severity, rng), tcl);
      out.draws[i] = w;
    }
  }
  return out;
}

EmpiricalGainModel::EmpiricalGainModel(EmpiricalGainSample sample) : sample_(std::move(sample)) {
  if (sample_.draws.empty()) throw ConfigError("empirical gain sample is empty");
  sorted_ = sample_.draws;
  if (std::any_of(sorted_.begin(), sorted_.end(), [](double w) { return !(w >= 0.0) || !std::isfinite(w); })) {
    throw ConfigError("empirical gain sample must hold finite nonnegative draws");
  }
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.assign(sorted_.size() + 1, 0.0);
  prefix_sq_.assign(sorted_.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + sorted_[i];
    prefix_sq_[i + 1] = prefix_sq_[i] + sorted_[i] * sorted_[i];
  }
  mean_ = prefix_.back() / static_cast<double>(sorted_.size());
}

std::size_t EmpiricalGainModel::count_below(double delta) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), delta) - sorted_.begin());
}

double EmpiricalGainModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const std::size_t n = count_below(delta);
  return (static_cast<double>(n) * delta - prefix_[n]) / static_cast<double>(sorted_.size());
}

double EmpiricalGainModel::claim_probability(double delta) const {
  return 1.0 - static_cast<double>(count_below(delta)) / static_cast<double>(sorted_.size());
}

double EmpiricalGainModel::mean_stderr() const {
  const double M = static_cast<double>(sorted_.size());
  if (M < 2) return 0.0;
  const double var = (prefix_sq_.back() - M * mean_ * mean_) / (M - 1.0);
  return std::sqrt(std::max(var, 0.0) / M);
}

EstimateWithError EmpiricalGainModel::expected_max_with_error(double c1, double c2) const {
  const double value = expected_max(c1, c2);
  const double M = static_cast<double>(sorted_.size());
  if (c2 == -std::numeric_limits<double>::infinity()) return {value, mean_stderr()};
  // h_i = c2 for W_i < delta, c1 + W_i otherwise.
  const std::size_t n = count_below(c2 - c1);
  const double n_lo = static_cast<double>(n);
  const double n_hi = M - n_lo;
  const double sum_hi = prefix_.back() - prefix_[n];
  const double sq_hi = prefix_sq_.back() - prefix_sq_[n];
  const double sum_h = n_lo * c2 + n_hi * c1 + sum_hi;
  const double sum_h2 = n_lo * c2 * c2 + n_hi * c1 * c1 + 2.0 * c1 * sum_hi + sq_hi;
  const double mean_h = sum_h / M;
  double var = M > 1 ? (sum_h2 - M * mean_h * mean_h) / (M - 1.0) : 0.0;
  return {value, std::sqrt(std::max(var, 0.0) / M)};
}

ValueTableWithError compute_value_table_with_error(const EmpiricalGainModel& model, Horizon horizon) {
  ValueTable table = compute_value_table(model, horizon);
  ValueTable se(horizon);
  const auto& w = model.sample().draws;
  const std::size_t M = w.size();
  const double mean = model.mean_gain();
  // Influence functions of every cell, evaluated at each draw.
  const int T = horizon.T;
  const int k = horizon.k;
  auto idx = [k](int L, int l) { return static_cast<std::size_t>(L) * (k + 1) + static_cast<std::size_t>(l); };
  std::vector<std::vector<double>> inf(static_cast<std::size_t>(T + 1) * (k + 1));
  const std::vector<double> zeros(M, 0.0);
  for (int L = 0; L <= T; ++L) inf[idx(L, 0)] = zeros;
  for (int L = 1; L <= T; ++L) {
    for (int l = 1; l <= std::min(L, k); ++l) {
      std::vector<double> cur(M);
      const double v = table.at(L, l);
      if (l == L) {
        const auto& prev = inf[idx(L - 1, l - 1)];
        for (std::size_t i = 0; i < M; ++i) cur[i] = (w[i] - mean) + prev[i];
      } else {
        const double c1 = table.at(L - 1, l - 1);
        const double c2 = table.at(L - 1, l);
        const double p_claim = model.claim_probability(c2 - c1);
        const auto& claim = inf[idx(L - 1, l - 1)];
        const auto& wait = inf[idx(L - 1, l)];
        for (std::size_t i = 0; i < M; ++i) {
          cur[i] = std::max(c1 + w[i], c2) - v + p_claim * claim[i] + (1.0 - p_claim) * wait[i];
        }
      }
      double ss = 0.0;
      for (double x : cur) ss += x * x;
      se.set(L, l, M > 1 ? std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M)) : 0.0);
      inf[idx(L, l)] = std::move(cur);
    }
  }
  return {std::move(table), std::move(se)};
}

GainModelPtr make_gain_model(const LDAModel& lda, const PolicySpec& policy, const ILPAuxModel* ilp_aux,
                             std::size_t ilp_samples, std::uint64_t ilp_seed) {
  policy.validate();
  switch (policy.kind) {
    case PolicyKind::ALP:
      if (policy.objective == Objective::Local) return std::make_shared<ALPLocalModel>(lda, policy.param);
      return std::make_shared<ALPGlobalModel>(lda, policy.param);
    case PolicyKind::PAP:
      if (policy.objective == Objective::Local) return std::make_shared<PAPLocalModel>(lda, policy.param);
      return std::make_shared<PAPGlobalModel>(lda, policy.param);
    case PolicyKind::ILP:
      if (policy.objective == Objective::Local) {
        if (ilp_aux == nullptr) throw ConfigError("ILP local objective needs the auxiliary model");
        return std::make_shared<ILPLocalModel>(*ilp_aux);
      }
      return std::make_shared<EmpiricalGainModel>(ilp_global_sample(lda, policy.param, ilp_samples, ilp_seed));
  }
  throw ConfigError("unsupported policy");
}

}  // namespace mstop

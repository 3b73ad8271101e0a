#include <algorithm>
#include <cmath>
#include <string>

#include "mstop/error.hpp"
#include "mstop/policies.hpp"

namespace mstop {
namespace {

void check_attachment(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError("PAP attachment point must be a nonnegative finite number");
  }
}

std::vector<double> at_least_table(const LDAModel& lda) {
  // at_least[j] = P[N >= j]
  std::vector<double> out(static_cast<std::size_t>(lda.m_max) + 2);
  for (int j = 0; j <= lda.m_max + 1; ++j) out[static_cast<std::size_t>(j)] = poisson_tail(j - 1, lda.frequency);
  return out;
}

}  // namespace

double mstar_pmf(int m_star, const LDAModel& lda, double attachment, const QuadratureSpec& quad) {
  if (m_star < 1) throw std::domain_error("mstar_pmf requires m_star >= 1");
  check_attachment(attachment);
  const IGParams& x = lda.severity;
  if (m_star == 1) return ig_sf(attachment, x);
  if (attachment == 0.0) return 0.0;
  const IGParams prev = ig_sum_params(m_star - 1, x);
  auto integrand = [&](double a) { return ig_sf(attachment - a, x) * ig_density(a, prev); };
  return std::clamp(integrate(integrand, 0.0, attachment, quad).value, 0.0, 1.0);
}

PAPWeights pap_weights(const LDAModel& lda, double attachment, const QuadratureSpec& quad) {
  check_attachment(attachment);
  const auto pmf = poisson_pmf_table(lda.frequency, lda.m_max);
  const IGSums sums(lda.severity);
  const auto n = static_cast<std::size_t>(lda.m_max);
  PAPWeights w;
  w.mstar.resize(n);
  w.Dm.resize(n);
  w.Dmm.assign(n, std::vector<double>(n, 0.0));
  for (int ms = 1; ms <= lda.m_max; ++ms) w.mstar[static_cast<std::size_t>(ms - 1)] = mstar_pmf(ms, lda, attachment, quad);
  for (int m = 1; m <= lda.m_max; ++m) {
    const double p = pmf[static_cast<std::size_t>(m)];
    w.Dm[static_cast<std::size_t>(m - 1)] = p * sums.cdf(m, attachment);
    for (int ms = 1; ms <= m; ++ms) {
      w.Dmm[static_cast<std::size_t>(ms - 1)][static_cast<std::size_t>(m - 1)] = p * w.mstar[static_cast<std::size_t>(ms - 1)];
    }
  }
  return w;
}

// ---------------------------------------------------------------- local

PAPLocalModel::PAPLocalModel(const LDAModel& lda, double attachment, const QuadratureSpec& quad)
    : lda_(lda),
      attach_(attachment),
      sums_(lda.severity),
      pmf_(poisson_pmf_table(lda.frequency, lda.m_max)),
      at_least_(at_least_table(lda)),
      weights_(pap_weights(lda, attachment, quad)),
      quad_(quad) {
  // Z~ = 0 when the year is empty or the very first loss crosses.
  atom0_ = pmf_[0] + weights_.mstar[0] * at_least_[1];
  mean_loss_ = 0.0;
  if (attach_ > 0.0) {
    mean_loss_ = integrate([&](double z) { return z * crossing_density(z); }, 0.0, attach_, quad_).value;
  }
  for (int m = 1; m <= lda_.m_max; ++m) {
    mean_loss_ += pmf_[static_cast<std::size_t>(m)] * sums_.partial_expectation(m, attach_);
  }
}

// Sub-density of S_j on paths where loss j+1 exists and crosses:
// sum_j P[N >= j+1] f_{S_j}(z) P[X > A - z].
double PAPLocalModel::crossing_density(double z) const {
  if (!(z > 0.0) || z > attach_) return 0.0;
  double s = 0.0;
  for (int j = 1; j < lda_.m_max; ++j) s += at_least_[static_cast<std::size_t>(j + 1)] * sums_.pdf(j, z);
  return s * ig_sf(attach_ - z, lda_.severity);
}

double PAPLocalModel::density(double z) const {
  if (!(z > 0.0) || z > attach_) return 0.0;
  double s = crossing_density(z);
  for (int m = 1; m <= lda_.m_max; ++m) s += pmf_[static_cast<std::size_t>(m)] * sums_.pdf(m, z);
  return s;
}

Atoms PAPLocalModel::atoms() const { return {{0.0, atom0_}}; }

double PAPLocalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const double u = std::min(delta, attach_);
  double s = delta * atom0_;
  if (u > 0.0) {
    s += integrate([&](double z) { return (delta - z) * crossing_density(z); }, 0.0, u, quad_).value;
  }
  for (int m = 1; m <= lda_.m_max; ++m) {
    const double p = pmf_[static_cast<std::size_t>(m)];
    s += p * std::max(0.0, delta * sums_.cdf(m, u) - sums_.partial_expectation(m, u));
  }
  return s;
}

// --------------------------------------------------------------- global

PAPGlobalModel::PAPGlobalModel(const LDAModel& lda, double attachment, const QuadratureSpec& quad)
    : lda_(lda),
      attach_(attachment),
      sums_(lda.severity),
      pmf_(poisson_pmf_table(lda.frequency, lda.m_max)),
      weights_(pap_weights(lda, attachment, quad)),
      quad_(quad) {
  atom0_ = pmf_[0];
  for (int m = 1; m <= lda_.m_max; ++m) atom0_ += pmf_[static_cast<std::size_t>(m)] * sums_.cdf(m, attach_);

  // Mean through the crossing loss: E[W; M* = m*, N = m] = E[X_{m*}; M* = m*] p_m
  // + (m - m*) mu P[M* = m*] p_m, summed over m >= m*.
  const IGParams& x = lda_.severity;
  const double mu = x.mu;
  const double upper_x = mu - sums_.partial_expectation(1, attach_);  // E[X; X > A]
  mean_ = 0.0;
  for (int ms = 1; ms <= lda_.m_max; ++ms) {
    double crossing_mean = upper_x;
    if (ms >= 2) {
      const int j = ms - 1;
      const double fj = sums_.cdf(j, attach_);
      crossing_mean = fj * upper_x;
      if (attach_ > 0.0) {
        crossing_mean += integrate(
            [&](double v) { return v * ig_density(v, x) * (fj - sums_.cdf(j, attach_ - v)); }, 0.0,
            attach_, quad_).value;
      }
    }
    double tail_count = 0.0;  // sum_{m >= m*} p_m (m - m*)
    double reach = 0.0;       // P[N >= m*]
    for (int m = ms; m <= lda_.m_max; ++m) {
      tail_count += pmf_[static_cast<std::size_t>(m)] * (m - ms);
      reach += pmf_[static_cast<std::size_t>(m)];
    }
    mean_ += crossing_mean * reach + mu * weights_.mstar[static_cast<std::size_t>(ms - 1)] * tail_count;
  }
}

double PAPGlobalModel::crossing_weight(int m_star, double x) const {
  if (m_star == 1) return x > attach_ ? 1.0 : 0.0;
  const int j = m_star - 1;
  const double lo = attach_ - x;
  return sums_.cdf(j, attach_) - (lo > 0.0 ? sums_.cdf(j, lo) : 0.0);
}

// E[(delta - W)^+] = delta P[W = 0]
//   + int_0^delta f_X(x) sum_{m*} Q_{m*}(x) sum_{r>=0} p_{m*+r} Phi_r(delta - x) dx
double PAPGlobalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const int M = lda_.m_max;
  std::vector<double> phi(static_cast<std::size_t>(M) + 1);
  auto integrand = [&](double x) {
    const double fx = ig_density(x, lda_.severity);
    if (fx == 0.0) return 0.0;
    const double y = delta - x;
    for (int r = 0; r <= M; ++r) phi[static_cast<std::size_t>(r)] = sums_.stop_loss(r, y);
    double s = 0.0;
    for (int ms = 1; ms <= M; ++ms) {
      const double q = crossing_weight(ms, x);
      if (q == 0.0) continue;
      double psi = 0.0;
      for (int r = 0; ms + r <= M; ++r) psi += pmf_[static_cast<std::size_t>(ms + r)] * phi[static_cast<std::size_t>(r)];
      s += q * psi;
    }
    return fx * s;
  };
  double s = delta * atom0_;
  const double split = std::min(delta, attach_);
  if (split > 0.0) s += integrate(integrand, 0.0, split, quad_).value;
  if (delta > attach_) s += integrate(integrand, attach_, delta, quad_).value;
  return s;
}

double PAPGlobalModel::cdf(double w) const {
  if (w < 0.0) return 0.0;
  const int M = lda_.m_max;
  std::vector<double> F(static_cast<std::size_t>(M) + 1);
  auto integrand = [&](double x) {
    const double fx = ig_density(x, lda_.severity);
    if (fx == 0.0) return 0.0;
    for (int r = 0; r <= M; ++r) F[static_cast<std::size_t>(r)] = sums_.cdf(r, w - x);
    double s = 0.0;
    for (int ms = 1; ms <= M; ++ms) {
      const double q = crossing_weight(ms, x);
      if (q == 0.0) continue;
      double inner = 0.0;
      for (int r = 0; ms + r <= M; ++r) inner += pmf_[static_cast<std::size_t>(ms + r)] * F[static_cast<std::size_t>(r)];
      s += q * inner;
    }
    return fx * s;
  };
  double s = atom0_;
  const double split = std::min(w, attach_);
  if (split > 0.0) s += integrate(integrand, 0.0, split, quad_).value;
  if (w > attach_) s += integrate(integrand, attach_, w, quad_).value;
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace mstop

#include "oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "mstop/random.hpp"

namespace oracle {
namespace {

constexpr std::size_t kChunk = 1 << 14;

double ig_density(double x, double mu, double lambda) {
  if (!(x > 0.0)) return 0.0;
  return std::sqrt(lambda / (2.0 * std::numbers::pi * x * x * x)) *
         std::exp(-lambda * (x - mu) * (x - mu) / (2.0 * mu * mu * x));
}

// Policy year straight from the definitions.
void one_year(const mstop::LDAModel& lda, const mstop::PolicySpec& policy, mstop::RngStream& rng, double& z,
              double& zt) {
  const int n = rng.poisson(lda.frequency.rate);
  z = 0.0;
  zt = 0.0;
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = mstop::sample_ig(lda.severity, rng);
    z += x;
    running += x;
    switch (policy.kind) {
      case mstop::PolicyKind::ILP: zt += x > policy.param ? x - policy.param : 0.0; break;
      case mstop::PolicyKind::PAP:
        if (running <= policy.param) zt += x;
        break;
      case mstop::PolicyKind::ALP: break;
    }
  }
  if (policy.kind == mstop::PolicyKind::ALP) zt = z > policy.param ? z - policy.param : 0.0;
}

}  // namespace

YearSample simulate_years(const mstop::LDAModel& lda, const mstop::PolicySpec& policy, std::size_t M,
                          std::uint64_t seed) {
  YearSample s;
  s.z.resize(M);
  s.ztilde.resize(M);
  for (std::size_t start = 0; start < M; start += kChunk) {
    mstop::RngStream rng(seed, 1000003 + start / kChunk);
    for (std::size_t i = start; i < std::min(M, start + kChunk); ++i) one_year(lda, policy, rng, s.z[i], s.ztilde[i]);
  }
  return s;
}

std::vector<double> simulate_gains(const mstop::LDAModel& lda, const mstop::PolicySpec& policy, std::size_t M,
                                   std::uint64_t seed, const mstop::ILPAuxModel* aux) {
  std::vector<double> w(M);
  if (aux != nullptr) {
    for (std::size_t start = 0; start < M; start += kChunk) {
      mstop::RngStream rng(seed, 2000003 + start / kChunk);
      for (std::size_t i = start; i < std::min(M, start + kChunk); ++i) {
        const int n = rng.poisson(aux->aux_rate);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += mstop::sample_ig(aux->aux_severity, rng);
        w[i] = -s;
      }
    }
    return w;
  }
  const YearSample y = simulate_years(lda, policy, M, seed);
  for (std::size_t i = 0; i < M; ++i) {
    w[i] = policy.objective == mstop::Objective::Local ? -y.ztilde[i] : y.z[i] - y.ztilde[i];
  }
  return w;
}

Estimate sample_mean(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate expected_max(const std::vector<double>& w, double c1, double c2) {
  std::vector<double> h(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) h[i] = std::max(c1 + w[i], c2);
  return sample_mean(h);
}

namespace {

// Value of the game at a node of the explicit scenario tree. The node is
// identified by the path prefix; children enumerate the next gain.
double tree_value(const std::vector<double>& values, const std::vector<double>& probs, int T, int rights,
                  std::vector<double>& prefix) {
  const int t = static_cast<int>(prefix.size());  // years already observed
  if (rights == 0 || t == T) return 0.0;
  double v = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    prefix.push_back(values[j]);
    const int left_after = T - t - 1;
    double best = -INFINITY;
    // Claim now.
    best = std::max(best, values[j] + tree_value(values, probs, T, rights - 1, prefix));
    // Wait, if still feasible.
    if (rights <= left_after) best = std::max(best, tree_value(values, probs, T, rights, prefix));
    prefix.pop_back();
    v += probs[j] * best;
  }
  return v;
}

void enumerate(const std::vector<double>& values, const std::vector<double>& probs, int T, std::vector<double>& path,
               double weight, const std::function<double(const std::vector<double>&)>& f, double& acc) {
  if (static_cast<int>(path.size()) == T) {
    acc += weight * f(path);
    return;
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    path.push_back(values[j]);
    enumerate(values, probs, T, path, weight * probs[j], f, acc);
    path.pop_back();
  }
}

}  // namespace

double exhaustive_game_value(const std::vector<double>& values, const std::vector<double>& probs, int T, int k) {
  std::vector<double> prefix;
  return tree_value(values, probs, T, k, prefix);
}

double enumerate_expected_gain(const std::vector<double>& values, const std::vector<double>& probs, int T,
                               const std::function<double(const std::vector<double>&)>& policy_gain) {
  std::vector<double> path;
  double acc = 0.0;
  enumerate(values, probs, T, path, 1.0, policy_gain, acc);
  return acc;
}

double ks_pvalue(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1.0) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  const double lam = (sn + 0.12 + 0.11 / sn) * d;
  double q = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lam * lam);
    q += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

double chi_square_uniform_pvalue(const std::vector<double>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  const double dof = static_cast<double>(counts.size()) - 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

double bessel_k_integral(double p, double z) {
  // K_p(z) = 1/2 int_0^inf u^{p-1} exp(-z (u + 1/u) / 2) du, split at u = 1
  // and mapped to (1, inf) on both pieces (u -> 1/u on the lower one).
  boost::math::quadrature::exp_sinh<double> integrator;
  auto term = [&](double u, double q) {
    const double e = std::exp(-0.5 * z * (u + 1.0 / u));
    return e == 0.0 ? 0.0 : std::pow(u, q) * e;
  };
  auto upper = [&](double u) { return term(u, p - 1.0); };
  auto lower = [&](double v) { return term(v, -p - 1.0); };
  const double a = integrator.integrate([&](double s) { return upper(1.0 + s); }, 0.0,
                                        std::numeric_limits<double>::infinity(), 1e-14);
  const double b = integrator.integrate([&](double s) { return lower(1.0 + s); }, 0.0,
                                        std::numeric_limits<double>::infinity(), 1e-14);
  return 0.5 * (a + b);
}

double gig_cdf_legendre(double x, double alpha, double beta, double p) {
  if (!(x > 0.0)) return 0.0;
  const double omega = std::sqrt(alpha * beta);
  const double norm = std::pow(alpha / beta, 0.5 * p) / (2.0 * bessel_k_integral(p, omega));
  auto g = [&](double t) {
    const double u = std::exp(t);
    return norm * std::pow(u, p) * std::exp(-0.5 * (alpha * u + beta / u));
  };
  // Fixed 30-point Gauss-Legendre panels of width 0.25 on [-40, ln x].
  const double hi = std::log(x);
  const double lo = std::min(-40.0, hi - 1.0);
  const int panels = static_cast<int>(std::ceil((hi - lo) / 0.25));
  const double w = (hi - lo) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    s += boost::math::quadrature::gauss<double, 30>::integrate(g, lo + i * w, lo + (i + 1) * w);
  }
  return s;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, tol);
}

double integrate_to_inf(const std::function<double(double)>& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  // Far-tail abscissae can give 0 * inf in a density; those points carry no mass.
  return integrator.integrate(
      [&](double s) {
        const double v = f(a + s);
        return std::isfinite(v) ? v : 0.0;
      },
      0.0, std::numeric_limits<double>::infinity(), tol);
}

double ig_cdf_quadrature(double x, double mu, double lambda) {
  if (!(x > 0.0)) return 0.0;
  return integrate([&](double u) { return ig_density(u, mu, lambda); }, 0.0, x, 1e-13);
}

double ig_partial_expectation_quadrature(double x, double mu, double lambda) {
  if (!(x > 0.0)) return 0.0;
  return integrate([&](double u) { return u * ig_density(u, mu, lambda); }, 0.0, x, 1e-13);
}

bool bracket_positive_scan(double a, double mu3, double mu4) {
  const double c3 = 1.0 / (6.0 * a * (a + 1.0) * (a + 2.0));
  const double c4 = c3 / (4.0 * (a + 3.0));
  const double A3 = c3 * (mu3 - 2.0 * a);
  const double A4 = c4 * (mu4 - 12.0 * mu3 - 3.0 * a * a + 18.0 * a);
  if (A4 < 0.0) return false;
  const double u_max = 1.5 * boost::math::gamma_p_inv(a, 1.0 - 1e-12);
  constexpr int kGrid = 20000;
  for (int i = 0; i <= kGrid; ++i) {
    const double u = u_max * i / kGrid;
    const double L3 = u * u * u - 3 * (a + 2) * u * u + 3 * (a + 2) * (a + 1) * u - (a + 2) * (a + 1) * a;
    const double L4 = u * u * u * u - 4 * (a + 3) * u * u * u + 6 * (a + 3) * (a + 2) * u * u -
                      4 * (a + 3) * (a + 2) * (a + 1) * u + (a + 3) * (a + 2) * (a + 1) * a;
    if (1.0 + A3 * L3 + A4 * L4 < 0.0) return false;
  }
  return true;
}

LatticeBoundary scan_region(double a, double mu3_lo, double mu3_hi, int n3, double mu4_lo, double mu4_hi, int n4) {
  LatticeBoundary out;
  out.mu4_step = (mu4_hi - mu4_lo) / n4;
  for (int i = 0; i <= n3; ++i) {
    const double m3 = mu3_lo + (mu3_hi - mu3_lo) * i / n3;
    double found = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j <= n4; ++j) {
      const double m4 = mu4_lo + out.mu4_step * j;
      if (bracket_positive_scan(a, m3, m4)) {
        found = m4;
        break;
      }
    }
    out.mu3.push_back(m3);
    out.mu4_min.push_back(found);
  }
  return out;
}

mstop::MomentSet lognormal_compound_moments_mc(double rate, double mu, double sigma, std::size_t M,
                                                std::uint64_t seed) {
  std::vector<double> z(M);
  for (std::size_t start = 0; start < M; start += kChunk) {
    mstop::RngStream rng(seed, 3000003 + start / kChunk);
    for (std::size_t i = start; i < std::min(M, start + kChunk); ++i) {
      const int n = rng.poisson(rate);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += mstop::sample_lognormal(mu, sigma, rng);
      z[i] = s;
    }
  }
  return mstop::sample_moments(z);
}

}  // namespace oracle

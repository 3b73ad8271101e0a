#include "mstop/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mstop/error.hpp"
#include "mstop/special_functions.hpp"

namespace mstop {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

bool is_half(double p) { return std::abs(std::abs(p) - 0.5) < 1e-14; }

// For IG-type closed forms with mean m and shape l at x > 0:
//   z1 = sqrt(l/x)(x/m - 1), z2 = sqrt(l/x)(x/m + 1)
//   F_{-1/2} = Phi(z1) + e^{2l/m} Phi(-z2),  F_{+1/2} = Phi(z1) - e^{2l/m} Phi(-z2)
// and e^{2l/m} Phi(-z2) = exp(-z1^2/2) erfcx(z2/sqrt2) / 2 avoids overflow.
// sign = +1 selects p = -1/2, sign = -1 selects p = +1/2.
void half_cdf_sf(double x, double m, double l, double sign, double& cdf, double& sf) {
  if (x <= 0.0) {
    cdf = 0.0;
    sf = 1.0;
    return;
  }
  if (std::isinf(x)) {
    cdf = 1.0;
    sf = 0.0;
    return;
  }
  const double s = std::sqrt(l / x);
  const double z1 = s * (x / m - 1.0);
  const double z2 = s * (x / m + 1.0);
  const double ez = std::exp(-0.5 * z1 * z1);
  const double tail = 0.5 * ez * erfcx(z2 * kInvSqrt2);
  if (z1 <= 0.0) {
    cdf = normal_cdf(z1) + sign * tail;
    sf = 1.0 - cdf;
  } else {
    sf = 0.5 * ez * erfcx(z1 * kInvSqrt2) - sign * tail;
    cdf = 1.0 - sf;
  }
  cdf = std::clamp(cdf, 0.0, 1.0);
  sf = std::clamp(sf, 0.0, 1.0);
}

// Mean and shape of the IG whose GIG form has the given alpha, beta.
void gig_to_ig(const GIGParams& g, double& m, double& l) {
  m = std::sqrt(g.beta / g.alpha);
  l = g.beta;
}

}  // namespace

void IGParams::validate() const {
  if (!(mu > 0.0) || !(lambda > 0.0) || !std::isfinite(mu) || !std::isfinite(lambda)) {
    throw std::domain_error("IG parameters require mu > 0 and lambda > 0");
  }
}

void GIGParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(p)) {
    throw std::domain_error("GIG parameters require alpha > 0, beta > 0, finite p");
  }
}

void FrequencyModel::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("Poisson rate must be > 0");
  }
}

GIGParams ig_as_gig(const IGParams& params) {
  params.validate();
  return {params.lambda / (params.mu * params.mu), params.lambda, -0.5};
}

IGParams ig_sum_params(int n, const IGParams& params) {
  params.validate();
  if (n < 1) throw std::domain_error("ig_sum_params requires n >= 1");
  const double dn = n;
  return {dn * params.mu, dn * dn * params.lambda};
}

double ig_density(double x, const IGParams& params) {
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double d = x - params.mu;
  const double expo = -params.lambda * d * d / (2.0 * params.mu * params.mu * x);
  return std::sqrt(params.lambda / (2.0 * std::numbers::pi * x * x * x)) * std::exp(expo);
}

double ig_pdf(double x, const IGParams& params) {
  params.validate();
  require_finite(x, "ig_pdf argument");
  if (!(x > 0.0)) throw std::domain_error("ig_pdf requires x > 0");
  return ig_density(x, params);
}

double ig_cdf(double x, const IGParams& params) {
  params.validate();
  if (std::isnan(x)) throw std::domain_error("ig_cdf argument is NaN");
  double cdf = 0.0;
  double sf = 0.0;
  half_cdf_sf(x, params.mu, params.lambda, +1.0, cdf, sf);
  return cdf;
}

double ig_sf(double x, const IGParams& params) {
  params.validate();
  if (std::isnan(x)) throw std::domain_error("ig_sf argument is NaN");
  double cdf = 0.0;
  double sf = 0.0;
  half_cdf_sf(x, params.mu, params.lambda, +1.0, cdf, sf);
  return sf;
}

double ig_partial_expectation(double x, int n, const IGParams& params) {
  const IGParams s = ig_sum_params(n, params);
  if (std::isnan(x)) throw std::domain_error("ig_partial_expectation argument is NaN");
  double cdf = 0.0;
  double sf = 0.0;
  half_cdf_sf(x, s.mu, s.lambda, -1.0, cdf, sf);
  return s.mu * cdf;
}

double gig_log_pdf(double x, const GIGParams& params) {
  params.validate();
  require_finite(x, "gig_pdf argument");
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double omega = std::sqrt(params.alpha * params.beta);
  const double log_norm = 0.5 * params.p * std::log(params.alpha / params.beta) -
                          std::log(2.0) - log_bessel_k(params.p, omega);
  return log_norm + (params.p - 1.0) * std::log(x) -
         0.5 * (params.alpha * x + params.beta / x);
}

double gig_pdf(double x, const GIGParams& params) {
  return std::exp(gig_log_pdf(x, params));
}

double gig_half_cdf(double x, const GIGParams& params) {
  params.validate();
  if (!is_half(params.p)) throw std::domain_error("gig_half_cdf requires p = +-1/2");
  double m = 0.0;
  double l = 0.0;
  gig_to_ig(params, m, l);
  double cdf = 0.0;
  double sf = 0.0;
  half_cdf_sf(x, m, l, params.p < 0.0 ? 1.0 : -1.0, cdf, sf);
  return cdf;
}

double gig_half_sf(double x, const GIGParams& params) {
  params.validate();
  if (!is_half(params.p)) throw std::domain_error("gig_half_sf requires p = +-1/2");
  double m = 0.0;
  double l = 0.0;
  gig_to_ig(params, m, l);
  double cdf = 0.0;
  double sf = 0.0;
  half_cdf_sf(x, m, l, params.p < 0.0 ? 1.0 : -1.0, cdf, sf);
  return sf;
}

double gig_cdf(double x, const GIGParams& params, const QuadratureSpec& quad) {
  params.validate();
  quad.validate();
  if (std::isnan(x)) throw std::domain_error("gig_cdf argument is NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_c = gig_log_pdf(1.0, params) + 0.5 * (params.alpha + params.beta);
  // In t = ln u the integrand is exp(h(t)), h(t) = log_c + p t - (alpha e^t + beta e^-t)/2.
  auto h = [&](double t) {
    return log_c + params.p * t - 0.5 * (params.alpha * std::exp(t) + params.beta * std::exp(-t));
  };
  const double t_mode =
      std::log((params.p + std::sqrt(params.p * params.p + params.alpha * params.beta)) /
               params.alpha);
  const double h_peak = h(t_mode);
  double step = 1.0;
  double t_lo = t_mode - step;
  while (h(t_lo) > h_peak - 50.0) t_lo -= (step *= 2.0);
  step = 1.0;
  double t_hi = t_mode + step;
  while (h(t_hi) > h_peak - 50.0) t_hi += (step *= 2.0);
  auto integrand = [&](double t) { return std::exp(h(t)); };
  const double tx = std::log(x);
  if (tx <= t_lo) return 0.0;
  if (tx >= t_hi) return 1.0;
  if (tx <= t_mode) {
    return std::clamp(integrate(integrand, t_lo, tx, quad).value, 0.0, 1.0);
  }
  return std::clamp(1.0 - integrate(integrand, tx, t_hi, quad).value, 0.0, 1.0);
}

double poisson_pmf(int m, const FrequencyModel& freq) {
  freq.validate();
  if (m < 0) return 0.0;
  return std::exp(m * std::log(freq.rate) - freq.rate - std::lgamma(m + 1.0));
}

double poisson_tail(int m, const FrequencyModel& freq) {
  freq.validate();
  if (m < 0) return 1.0;
  return boost::math::gamma_p(m + 1.0, freq.rate);
}

int poisson_truncation(const FrequencyModel& freq, double tol) {
  freq.validate();
  const int floor_m = static_cast<int>(std::ceil(freq.rate + 10.0 * std::sqrt(freq.rate)));
  int m = 0;
  while (poisson_tail(m, freq) >= tol) ++m;
  return std::max(m, floor_m);
}

std::vector<double> poisson_pmf_table(const FrequencyModel& freq, int m_max) {
  std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) out[static_cast<std::size_t>(m)] = poisson_pmf(m, freq);
  return out;
}

double gamma_pdf(double x, double shape) {
  if (!(x > 0.0)) return 0.0;
  return std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
}

double gamma_cdf(double x, double shape) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(shape, x);
}

double gamma_sf(double x, double shape) {
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(shape, x);
}

double gamma_quantile(double prob, double shape) {
  return boost::math::gamma_p_inv(shape, prob);
}

}  // namespace mstop

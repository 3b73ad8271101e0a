#include "mstop/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mstop/quadrature.hpp"

namespace mstop {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

// True when p is n + 1/2 for an integer n.
bool is_half_integer(double p) {
  const double twice = 2.0 * p;
  return std::abs(twice - std::round(twice)) < 1e-14 &&
         std::abs(std::fmod(std::round(twice), 2.0)) == 1.0;
}

// exp(z) K_{n+1/2}(z) by upward recurrence from K_{1/2} = K_{-1/2}.
double half_integer_k_scaled(double p, double z) {
  const double nu_target = std::abs(p);
  const double base = std::sqrt(std::numbers::pi / (2.0 * z));
  double k_prev = base;  // order -1/2
  double k_curr = base;  // order 1/2
  for (double nu = 0.5; nu < nu_target - 0.25; nu += 1.0) {
    const double k_next = k_prev + (2.0 * nu / z) * k_curr;
    k_prev = k_curr;
    k_curr = k_next;
  }
  return k_curr;
}

double integral_k_scaled(double p, double z) {
  const double ap = std::abs(p);
  // exponent h(t) = |p| t - z (cosh t - 1) peaks at sinh t = |p| / z
  auto h = [&](double t) { return ap * t - z * (std::cosh(t) - 1.0); };
  const double t_peak = std::asinh(ap / z);
  const double h_peak = h(t_peak);
  double t_max = std::max(t_peak, 1.0);
  while (h(t_max) > h_peak - 50.0) t_max *= 1.5;
  auto integrand = [&](double t) {
    return std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(p * t);
  };
  QuadratureSpec spec{1e-300, 1e-14, 2000};
  double total = 0.0;
  if (t_peak > 0.0) total += integrate_nothrow(integrand, 0.0, t_peak, spec).value;
  total += integrate_nothrow(integrand, t_peak, t_max, spec).value;
  return total;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double erfcx(double t) {
  if (std::isnan(t)) return t;
  if (t < 0.0) return 2.0 * std::exp(t * t) - erfcx(-t);
  if (t < 5.0) return std::exp(t * t) * std::erfc(t);
  // Continued fraction erfc(t) = exp(-t^2)/sqrt(pi) / (t + (1/2)/(t + 1/(t + ...)))
  double frac = t;
  for (int n = 60; n >= 1; --n) frac = t + 0.5 * n / frac;
  return 1.0 / (std::sqrt(std::numbers::pi) * frac);
}

double bessel_k_scaled(double p, double z) {
  require_finite(p, "bessel_k order");
  require_finite(z, "bessel_k argument");
  if (!(z > 0.0)) throw std::domain_error("bessel_k requires z > 0");
  if (is_half_integer(p)) return half_integer_k_scaled(p, z);
  return integral_k_scaled(p, z);
}

double bessel_k(double p, double z) { return bessel_k_scaled(p, z) * std::exp(-z); }

double log_bessel_k(double p, double z) { return std::log(bessel_k_scaled(p, z)) - z; }

}  // namespace mstop

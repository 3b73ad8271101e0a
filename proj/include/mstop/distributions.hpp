#pragma once

#include <vector>

#include "mstop/quadrature.hpp"

namespace mstop {

// Inverse Gaussian law IG(mu, lambda): mean mu, shape lambda.
struct IGParams {
  double mu = 1.0;
  double lambda = 1.0;
  void validate() const;
};

// Generalized Inverse Gaussian with density proportional to
// x^(p-1) exp(-(alpha x + beta / x) / 2).
struct GIGParams {
  double alpha = 1.0;
  double beta = 1.0;
  double p = -0.5;
  void validate() const;
};

// Poisson claim counts per year.
struct FrequencyModel {
  double rate = 1.0;
  void validate() const;
};

// IG(mu, lambda) as a GIG with p = -1/2.
GIGParams ig_as_gig(const IGParams& params);

// Law of S_n = X_1 + ... + X_n for i.i.d. X ~ IG(mu, lambda): IG(n mu, n^2 lambda).
IGParams ig_sum_params(int n, const IGParams& params);

// Density; x <= 0 is a domain error.
double ig_pdf(double x, const IGParams& params);
// Density extended by 0 to x <= 0, for use inside integrands.
double ig_density(double x, const IGParams& params);
double ig_cdf(double x, const IGParams& params);
double ig_sf(double x, const IGParams& params);

// int_0^x u f_{S_n}(u) du, closed form through the p = +1/2 GIG CDF.
double ig_partial_expectation(double x, int n, const IGParams& params);

double gig_pdf(double x, const GIGParams& params);
double gig_log_pdf(double x, const GIGParams& params);
// General-order CDF by adaptive quadrature in t = ln u.
double gig_cdf(double x, const GIGParams& params, const QuadratureSpec& quad = {});
// Closed-form CDF / survival for p = +1/2 or p = -1/2.
double gig_half_cdf(double x, const GIGParams& params);
double gig_half_sf(double x, const GIGParams& params);

double poisson_pmf(int m, const FrequencyModel& freq);
// P[N > m].
double poisson_tail(int m, const FrequencyModel& freq);
// Smallest m with P[N > m] < tol, and at least rate + 10 sqrt(rate).
int poisson_truncation(const FrequencyModel& freq, double tol = 1e-10);
// pmf values for m = 0..m_max.
std::vector<double> poisson_pmf_table(const FrequencyModel& freq, int m_max);

// Gamma(shape, scale = 1) helpers.
double gamma_pdf(double x, double shape);
double gamma_cdf(double x, double shape);
double gamma_sf(double x, double shape);
double gamma_quantile(double prob, double shape);

}  // namespace mstop

#pragma once

namespace mstop {

// Standard normal CDF and survival function.
double normal_cdf(double x);
double normal_sf(double x);

// Scaled complementary error function exp(t^2) * erfc(t).
double erfcx(double t);

// Modified Bessel function of the third kind K_p(z), z > 0.
// Half-integer orders use the closed forms; any other order integrates
// K_p(z) = int_0^inf exp(-z cosh t) cosh(p t) dt.
double bessel_k(double p, double z);

// exp(z) * K_p(z), finite for large z where K_p itself underflows.
double bessel_k_scaled(double p, double z);

// log K_p(z).
double log_bessel_k(double p, double z);

}  // namespace mstop

#pragma once

#include <array>
#include <vector>

#include "mstop/gain_model.hpp"

namespace mstop {

// First four moments of the insured loss Y: mean and variance of Y, and the
// third and fourth central moments of U = b Y with b = E[Y] / Var[Y].
struct MomentSet {
  double mean = 1.0;
  double variance = 1.0;
  double mu3 = 2.0;
  double mu4 = 9.0;
  void validate() const;  // ConfigError on non-positive mean / variance
};

// Build a MomentSet from central moments of Y itself.
MomentSet moments_from_central(double mean, double variance, double central3, double central4);

// Compound Poisson moments from the first four raw severity moments.
MomentSet compound_poisson_moments(double rate, const std::array<double, 4>& raw_severity);

// Moments of a Gamma(shape, rate) loss; the expansion collapses to the kernel.
MomentSet gamma_moments(double shape, double rate);

// Sample moments.
MomentSet sample_moments(const std::vector<double>& draws);

struct PositivityVerdict {
  bool positive = true;
  double at_u = 0.0;      // where the bracket is smallest (inf: negative at infinity)
  double min_value = 1.0; // smallest bracket value found
};

struct ExpansionFit {
  MomentSet moments;
  double a = 1.0;
  double b = 1.0;
  double A3 = 0.0;
  double A4 = 0.0;
  std::array<double, 5> Astar{};  // weights of f_G(b z; a + k - 1), k = 1..5
  PositivityVerdict positivity;
};

// Laguerre polynomials orthogonal under the Gamma(a, 1) kernel, orders 0..4.
double laguerre(int n, double a, double u);
double laguerre_derivative(int n, double a, double u);

ExpansionFit fit_expansion(const MomentSet& moments);
// Same with explicit (mu3, mu4), keeping mean and variance.
ExpansionFit fit_with_shape(const MomentSet& moments, double mu3, double mu4);

// 1 + A3 L3(u) + A4 L4(u)
double bracket(const ExpansionFit& fit, double u);
double approx_pdf(const ExpansionFit& fit, double z);
double approx_cdf(const ExpansionFit& fit, double z);

// Gamma(a, 1) quantile at 1 - 1e-12, plus 50%.
double default_u_max(double a);

// Dense grid plus local refinement of the bracket on (0, u_max]; a
// negative leading coefficient also counts as a violation.
PositivityVerdict positivity_check(const ExpansionFit& fit, double u_max);

// The six functions of the zero-and-tangency system
//   mu3 B1 + mu4 B2 + B3 = 0,  mu3 B1' + mu4 B2' + B3' = 0.
struct BSystem {
  double B1, B2, B3, dB1, dB2, dB3;
};
BSystem b_system(double a, double u);
// Same divided by the kernel g(u; a) (identical zero set, no underflow).
BSystem b_system_reduced(double a, double u);

struct CurvePoint {
  double u, mu3, mu4;
};

struct PositivityCurve {
  std::vector<CurvePoint> samples;
  std::vector<double> singular_u;  // grid points skipped as singular
};

PositivityCurve positivity_boundary(double a, const std::vector<double>& u_grid);

// Curve point at a single u; false when singular.
bool boundary_point(double a, double u, CurvePoint& out);

// Does the bracket with these shape moments stay >= -tol on (0, u_max]?
bool shape_admissible(double a, double mu3, double mu4, double tol = 1e-12);

// Range of u whose curve points are admissible (endpoints by bisection).
struct AdmissibleSegment {
  bool found = false;
  double u_lo = 0.0;
  double u_hi = 0.0;
};
AdmissibleSegment admissible_segment(double a, double u_max, int grid = 400);

// Nearest admissible curve point in the distance scaled by the Gamma
// kernel's own (mu3, mu4) = (2a, 3a^2 + 6a). Returns the fit unchanged if
// it is already positive.
ExpansionFit constrained_refit(const ExpansionFit& fit);

// E[min{c1 + Y, c2}] under the expansion, 0 <= c1 <= c2.
double approx_expected_min(const ExpansionFit& fit, double c1, double c2);

// Local-objective gain model driven by the expansion: W = -Y.
class ApproxLocalModel : public LocalLossModel {
 public:
  explicit ApproxLocalModel(ExpansionFit fit);
  double mean_loss() const override { return fit_.moments.mean; }
  double lower_partial(double delta) const override;
  const ExpansionFit& fit() const { return fit_; }

 private:
  ExpansionFit fit_;
};

}  // namespace mstop

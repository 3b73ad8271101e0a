#pragma once

#include <functional>

namespace mstop {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

// Adaptive Gauss-Kronrod (7/15) on a finite interval [a, b] with global
// bisection of the interval carrying the largest error estimate.
// Throws NumericalError when the tolerance is not met within
// spec.max_subdivisions.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSpec& spec = {});

// Same, but returns the best estimate instead of throwing.
QuadratureResult integrate_nothrow(const std::function<double(double)>& f,
                                   double a, double b,
                                   const QuadratureSpec& spec = {});

}  // namespace mstop

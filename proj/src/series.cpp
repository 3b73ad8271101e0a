#include "mstop/series.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mstop/distributions.hpp"
#include "mstop/error.hpp"

namespace mstop {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma(a) / (3! Gamma(a + 3)) and Gamma(a) / (4! Gamma(a + 4)).
double c3_of(double a) { return 1.0 / (6.0 * a * (a + 1.0) * (a + 2.0)); }
double c4_of(double a) { return 1.0 / (24.0 * a * (a + 1.0) * (a + 2.0) * (a + 3.0)); }

double bracket_of(double a, double A3, double A4, double u) {
  return 1.0 + A3 * laguerre(3, a, u) + A4 * laguerre(4, a, u);
}

void shape_coefficients(double a, double mu3, double mu4, double& A3, double& A4) {
  A3 = c3_of(a) * (mu3 - 2.0 * a);
  A4 = c4_of(a) * (mu4 - 12.0 * mu3 - 3.0 * a * a + 18.0 * a);
}

PositivityVerdict scan_bracket(double a, double A3, double A4, double u_max) {
  PositivityVerdict v;
  // Leading behaviour at infinity.
  if (A4 < 0.0 || (A4 == 0.0 && A3 < 0.0)) {
    v.positive = false;
    v.at_u = kInf;
    v.min_value = -kInf;
    return v;
  }
  constexpr int kGrid = 4000;
  const double h = u_max / kGrid;
  std::vector<double> vals(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) vals[static_cast<std::size_t>(i)] = bracket_of(a, A3, A4, i * h);
  auto f = [&](double u) { return bracket_of(a, A3, A4, u); };
  v.min_value = vals[0];
  v.at_u = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double here = vals[static_cast<std::size_t>(i)];
    if (here < v.min_value) {
      v.min_value = here;
      v.at_u = i * h;
    }
    const bool local_min = i > 0 && i < kGrid && here <= vals[static_cast<std::size_t>(i - 1)] &&
                           here <= vals[static_cast<std::size_t>(i + 1)];
    if (local_min) {
      auto r = boost::math::tools::brent_find_minima(f, (i - 1) * h, (i + 1) * h, 52);
      if (r.second < v.min_value) {
        v.min_value = r.second;
        v.at_u = r.first;
      }
    }
  }
  v.positive = v.min_value >= 0.0;
  return v;
}

BSystem reduced(double a, double u) {
  const double c3 = c3_of(a);
  const double c4 = c4_of(a);
  const double L3 = laguerre(3, a, u);
  const double L4 = laguerre(4, a, u);
  const double d3 = laguerre_derivative(3, a, u);
  const double d4 = laguerre_derivative(4, a, u);
  const double k = (a - 1.0) / u - 1.0;
  const double q = 18.0 * a - 3.0 * a * a;
  BSystem s{};
  s.B1 = c3 * L3 - 12.0 * c4 * L4;
  s.B2 = c4 * L4;
  s.B3 = 1.0 - 2.0 * a * c3 * L3 + q * c4 * L4;
  s.dB1 = k * s.B1 + c3 * d3 - 12.0 * c4 * d4;
  s.dB2 = k * s.B2 + c4 * d4;
  s.dB3 = k * s.B3 - 2.0 * a * c3 * d3 + q * c4 * d4;
  return s;
}

}  // namespace

void MomentSet::validate() const {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw ConfigError("moment set needs a positive mean");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("moment set needs a positive variance (degenerate loss)");
  }
  if (!std::isfinite(mu3) || !std::isfinite(mu4)) throw ConfigError("moment set needs finite mu3, mu4");
}

MomentSet moments_from_central(double mean, double variance, double central3, double central4) {
  MomentSet m;
  m.mean = mean;
  m.variance = variance;
  const double b = mean / variance;
  m.mu3 = central3 * b * b * b;
  m.mu4 = central4 * b * b * b * b;
  m.validate();
  return m;
}

MomentSet compound_poisson_moments(double rate, const std::array<double, 4>& raw) {
  // Cumulants of a compound Poisson sum are rate times raw severity moments.
  const double k1 = rate * raw[0];
  const double k2 = rate * raw[1];
  const double k3 = rate * raw[2];
  const double k4 = rate * raw[3];
  return moments_from_central(k1, k2, k3, k4 + 3.0 * k2 * k2);
}

MomentSet gamma_moments(double shape, double rate) {
  MomentSet m;
  m.mean = shape / rate;
  m.variance = shape / (rate * rate);
  m.mu3 = 2.0 * shape;
  m.mu4 = 3.0 * shape * shape + 6.0 * shape;
  m.validate();
  return m;
}

MomentSet sample_moments(const std::vector<double>& draws) {
  if (draws.size() < 4) throw ConfigError("need at least 4 draws to estimate moments");
  const double n = static_cast<double>(draws.size());
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double x : draws) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  return moments_from_central(mean, m2 / n, m3 / n, m4 / n);
}

double laguerre(int n, double a, double u) {
  switch (n) {
    case 0: return 1.0;
    case 1: return u - a;
    case 2: return u * u - 2.0 * (a + 1.0) * u + (a + 1.0) * a;
    case 3:
      return ((u - 3.0 * (a + 2.0)) * u + 3.0 * (a + 2.0) * (a + 1.0)) * u - (a + 2.0) * (a + 1.0) * a;
    case 4:
      return (((u - 4.0 * (a + 3.0)) * u + 6.0 * (a + 3.0) * (a + 2.0)) * u -
              4.0 * (a + 3.0) * (a + 2.0) * (a + 1.0)) * u +
             (a + 3.0) * (a + 2.0) * (a + 1.0) * a;
    default: throw std::domain_error("laguerre: only orders 0..4 are supported");
  }
}

double laguerre_derivative(int n, double a, double u) {
  switch (n) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return 2.0 * u - 2.0 * (a + 1.0);
    case 3: return 3.0 * u * u - 6.0 * (a + 2.0) * u + 3.0 * (a + 2.0) * (a + 1.0);
    case 4:
      return 4.0 * u * u * u - 12.0 * (a + 3.0) * u * u + 12.0 * (a + 3.0) * (a + 2.0) * u -
             4.0 * (a + 3.0) * (a + 2.0) * (a + 1.0);
    default: throw std::domain_error("laguerre_derivative: only orders 0..4 are supported");
  }
}

ExpansionFit fit_with_shape(const MomentSet& moments, double mu3, double mu4) {
  moments.validate();
  ExpansionFit fit;
  fit.moments = moments;
  fit.moments.mu3 = mu3;
  fit.moments.mu4 = mu4;
  fit.a = moments.mean * moments.mean / moments.variance;
  fit.b = moments.mean / moments.variance;
  shape_coefficients(fit.a, mu3, mu4, fit.A3, fit.A4);
  const double a = fit.a;
  const double r3 = a * (a + 1.0) * (a + 2.0);  // Gamma(a+3)/Gamma(a)
  const double r4 = r3 * (a + 3.0);             // Gamma(a+4)/Gamma(a)
  const double t3 = r3 * fit.A3;
  const double t4 = r4 * fit.A4;
  fit.Astar = {(1.0 - t3 + t4) * fit.b, (3.0 * t3 - 4.0 * t4) * fit.b, (-3.0 * t3 + 6.0 * t4) * fit.b,
               (t3 - 4.0 * t4) * fit.b, t4 * fit.b};
  fit.positivity = positivity_check(fit, default_u_max(a));
  return fit;
}

ExpansionFit fit_expansion(const MomentSet& moments) {
  return fit_with_shape(moments, moments.mu3, moments.mu4);
}

double bracket(const ExpansionFit& fit, double u) { return bracket_of(fit.a, fit.A3, fit.A4, u); }

double approx_pdf(const ExpansionFit& fit, double z) {
  if (!(z > 0.0)) return 0.0;
  const double u = fit.b * z;
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += fit.Astar[static_cast<std::size_t>(k)] * gamma_pdf(u, fit.a + k);
  return s;
}

double approx_cdf(const ExpansionFit& fit, double z) {
  if (!(z > 0.0)) return 0.0;
  const double u = fit.b * z;
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += fit.Astar[static_cast<std::size_t>(k)] * gamma_cdf(u, fit.a + k);
  return s / fit.b;
}

double default_u_max(double a) { return 1.5 * gamma_quantile(1.0 - 1e-12, a); }

PositivityVerdict positivity_check(const ExpansionFit& fit, double u_max) {
  if (!(u_max > 0.0)) throw std::domain_error("positivity_check requires u_max > 0");
  return scan_bracket(fit.a, fit.A3, fit.A4, u_max);
}

BSystem b_system(double a, double u) {
  const BSystem r = reduced(a, u);
  const double g = gamma_pdf(u, a);
  // d/du [g p] = g [((a-1)/u - 1) p + p'], so every term carries the factor g.
  return {g * r.B1, g * r.B2, g * r.B3, g * r.dB1, g * r.dB2, g * r.dB3};
}

BSystem b_system_reduced(double a, double u) { return reduced(a, u); }

bool boundary_point(double a, double u, CurvePoint& out) {
  if (!(u > 0.0)) return false;
  const BSystem s = reduced(a, u);
  const double scale1 = std::abs(s.B1) + std::abs(s.B2) + std::abs(s.B3);
  if (std::abs(s.B1) <= 1e-12 * scale1) return false;
  const double denom = s.dB2 - s.dB1 * s.B2 / s.B1;
  const double denom_scale = std::abs(s.dB2) + std::abs(s.dB1 * s.B2 / s.B1);
  if (!(std::abs(denom) > 1e-12 * denom_scale)) return false;
  const double mu4 = (s.dB1 * s.B3 / s.B1 - s.dB3) / denom;
  const double mu3 = -(mu4 * s.B2 + s.B3) / s.B1;
  if (!std::isfinite(mu3) || !std::isfinite(mu4)) return false;
  out = {u, mu3, mu4};
  return true;
}

PositivityCurve positivity_boundary(double a, const std::vector<double>& u_grid) {
  if (!(a > 0.0)) throw std::domain_error("positivity_boundary requires a > 0");
  PositivityCurve curve;
  for (double u : u_grid) {
    if (!(u > 0.0)) throw std::domain_error("positivity_boundary grid values must be > 0");
    CurvePoint p{};
    if (boundary_point(a, u, p)) {
      curve.samples.push_back(p);
    } else {
      curve.singular_u.push_back(u);
    }
  }
  return curve;
}

bool shape_admissible(double a, double mu3, double mu4, double tol) {
  double A3 = 0.0;
  double A4 = 0.0;
  shape_coefficients(a, mu3, mu4, A3, A4);
  const PositivityVerdict v = scan_bracket(a, A3, A4, default_u_max(a));
  return v.min_value >= -tol;
}

AdmissibleSegment admissible_segment(double a, double u_max, int grid) {
  // Tangency points carry a double root, so the bracket minimum sits at
  // zero up to rounding.
  constexpr double kTol = 1e-9;
  auto ok = [&](double u) {
    CurvePoint p{};
    return boundary_point(a, u, p) && shape_admissible(a, p.mu3, p.mu4, kTol);
  };
  AdmissibleSegment seg;
  const double h = u_max / grid;
  int first = -1;
  int last = -1;
  for (int i = 1; i <= grid; ++i) {
    if (ok(i * h)) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return seg;
  seg.found = true;
  auto refine = [&](double good, double bad) {
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (good + bad);
      (ok(mid) ? good : bad) = mid;
    }
    return good;
  };
  seg.u_lo = first > 1 ? refine(first * h, (first - 1) * h) : first * h;
  seg.u_hi = last < grid ? refine(last * h, (last + 1) * h) : last * h;
  return seg;
}

ExpansionFit constrained_refit(const ExpansionFit& fit) {
  if (fit.positivity.positive) return fit;
  const double a = fit.a;
  const AdmissibleSegment seg = admissible_segment(a, default_u_max(a));
  if (!seg.found) throw NumericalError("no admissible point on the positivity curve");
  const double s3 = 2.0 * a;
  const double s4 = 3.0 * a * a + 6.0 * a;
  auto dist = [&](double u) {
    CurvePoint p{};
    if (!boundary_point(a, u, p)) return kInf;
    const double d3 = (p.mu3 - fit.moments.mu3) / s3;
    const double d4 = (p.mu4 - fit.moments.mu4) / s4;
    return d3 * d3 + d4 * d4;
  };
  constexpr int kGrid = 2000;
  const double h = (seg.u_hi - seg.u_lo) / kGrid;
  int best = 0;
  double best_d = kInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double d = dist(seg.u_lo + i * h);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const double lo = seg.u_lo + std::max(0, best - 1) * h;
  const double hi = seg.u_lo + std::min(kGrid, best + 1) * h;
  double u_best = seg.u_lo + best * h;
  if (hi > lo) {
    auto r = boost::math::tools::brent_find_minima(dist, lo, hi, 52);
    if (r.second < best_d) u_best = r.first;
  }
  CurvePoint p{};
  boundary_point(a, u_best, p);
  ExpansionFit out = fit_with_shape(fit.moments, p.mu3, p.mu4);
  // The tangency point touches zero; rounding can leave a -1e-15 dip.
  if (!out.positivity.positive && out.positivity.min_value > -1e-9) out.positivity.positive = true;
  return out;
}

double approx_expected_min(const ExpansionFit& fit, double c1, double c2) {
  if (std::isnan(c1) || std::isnan(c2) || c1 > c2) {
    throw std::domain_error("approx_expected_min requires c1 <= c2");
  }
  if (c2 == kInf) return c1 + fit.moments.mean;
  const double x = fit.b * (c2 - c1);
  const double b = fit.b;
  double s = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double w = fit.Astar[static_cast<std::size_t>(k - 1)];
    const double shape = fit.a + k - 1;
    // int_0^d z f_G(b z; s) dz = s / b^2 F_G(b d; s + 1), int_0^d f_G(b z; s) dz = F_G(b d; s) / b
    s += w * (shape / (b * b) * gamma_cdf(x, shape + 1.0) + c1 / b * gamma_cdf(x, shape) +
              c2 / b * gamma_sf(x, shape));
  }
  return s;
}

ApproxLocalModel::ApproxLocalModel(ExpansionFit fit) : fit_(std::move(fit)) {}

double ApproxLocalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  return delta - approx_expected_min(fit_, 0.0, delta);
}

}  // namespace mstop

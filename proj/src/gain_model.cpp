#include "mstop/gain_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mstop {
namespace {

[[noreturn]] void regime_error(const char* regime, double c1, double c2) {
  std::ostringstream msg;
  msg << "expected_max(" << c1 << ", " << c2 << ") outside the " << regime << " regime";
  throw std::domain_error(msg.str());
}

}  // namespace

double GainModel::expected_max(double c1, double c2) const {
  if (std::isnan(c1) || std::isnan(c2) || std::isinf(c1)) {
    throw std::domain_error("expected_max requires finite c1 and non-NaN c2");
  }
  if (c2 == -std::numeric_limits<double>::infinity()) return c1 + mean_gain();
  const double tol = 1e-9 * std::max({1.0, std::abs(c1), std::abs(c2)});
  switch (regime()) {
    case Regime::Local:
      if (c1 > tol || c2 > c1 + tol) regime_error("local (c2 <= c1 <= 0)", c1, c2);
      c1 = std::min(c1, 0.0);
      c2 = std::min(c2, c1);
      break;
    case Regime::Global:
      if (c1 < -tol || c2 < c1 - tol) regime_error("global (0 <= c1 <= c2)", c1, c2);
      c1 = std::max(c1, 0.0);
      c2 = std::max(c2, c1);
      break;
    case Regime::Unrestricted:
      break;
  }
  if (c2 == std::numeric_limits<double>::infinity()) return c2;
  return expected_max_impl(c1, c2);
}

double LocalLossModel::expected_max_impl(double c1, double c2) const {
  return c2 + lower_partial(c1 - c2);
}

double GlobalGainModel::expected_max_impl(double c1, double c2) const {
  return c1 + mean_gain() + lower_partial(c2 - c1);
}

}  // namespace mstop

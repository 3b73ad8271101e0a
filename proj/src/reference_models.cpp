#include "mstop/reference_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mstop/distributions.hpp"
#include "mstop/error.hpp"
#include "mstop/special_functions.hpp"

namespace mstop {

LogNormalLocalModel::LogNormalLocalModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("log-normal model requires finite mu and sigma > 0");
  }
}

double LogNormalLocalModel::mean_loss() const {
  return std::exp(mu_ + 0.5 * sigma_ * sigma_);
}

// E[(delta - Y)^+] = delta Phi(d) - e^{mu + sigma^2/2} Phi(d - sigma), d = (ln delta - mu)/sigma.
double LogNormalLocalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const double d = (std::log(delta) - mu_) / sigma_;
  return delta * normal_cdf(d) - mean_loss() * normal_cdf(d - sigma_);
}

std::shared_ptr<LogNormalLocalModel> lognormal_local_model(double mu, double sigma) {
  return std::make_shared<LogNormalLocalModel>(mu, sigma);
}

GammaLocalModel::GammaLocalModel(double shape, double rate) : shape_(shape), rate_(rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw ConfigError("gamma model requires shape, rate > 0");
}

double GammaLocalModel::mean_loss() const { return shape_ / rate_; }

double GammaLocalModel::lower_partial(double delta) const {
  if (!(delta > 0.0)) return 0.0;
  const double x = rate_ * delta;
  return delta * gamma_cdf(x, shape_) - (shape_ / rate_) * gamma_cdf(x, shape_ + 1.0);
}

DiscreteGainModel::DiscreteGainModel(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty() || values_.size() != probs_.size()) {
    throw ConfigError("discrete gain law needs matching non-empty values and probabilities");
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::any_of(probs_.begin(), probs_.end(), [](double p) { return p < 0.0; }) ||
      std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("discrete gain probabilities must be nonnegative and sum to 1");
  }
}

double DiscreteGainModel::mean_gain() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += probs_[i] * values_[i];
  return s;
}

double DiscreteGainModel::expected_max_impl(double c1, double c2) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += probs_[i] * std::max(c1 + values_[i], c2);
  return s;
}

}  // namespace mstop

#pragma once

#include <memory>
#include <vector>

#include "mstop/gain_model.hpp"

namespace mstop {

// W = -Y with Y ~ LogNormal(mu, sigma^2).
class LogNormalLocalModel : public LocalLossModel {
 public:
  LogNormalLocalModel(double mu, double sigma);
  double mean_loss() const override;
  double lower_partial(double delta) const override;

 private:
  double mu_;
  double sigma_;
};

std::shared_ptr<LogNormalLocalModel> lognormal_local_model(double mu, double sigma);

// W = -Y with Y ~ Gamma(shape, rate): density rate (rate y)^{shape-1} e^{-rate y} / Gamma(shape).
class GammaLocalModel : public LocalLossModel {
 public:
  GammaLocalModel(double shape, double rate);
  double mean_loss() const override;
  double lower_partial(double delta) const override;

 private:
  double shape_;
  double rate_;
};

// Finite-support gain law; no sign restriction on (c1, c2).
class DiscreteGainModel : public GainModel {
 public:
  DiscreteGainModel(std::vector<double> values, std::vector<double> probs);
  double mean_gain() const override;
  Regime regime() const override { return Regime::Unrestricted; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

 protected:
  double expected_max_impl(double c1, double c2) const override;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
};

}  // namespace mstop

#pragma once

#include <memory>

namespace mstop {

// Sign regime a model's closed forms are valid in.
//   Local:        c2 <= c1 <= 0   (W = -insured loss)
//   Global:       0 <= c1 <= c2   (W = loss removed by the policy)
//   Unrestricted: any (c1, c2)
enum class Regime { Local, Global, Unrestricted };

// The only two expectations the stopping recursion needs:
// E[W] and E[max{c1 + W, c2}].
class GainModel {
 public:
  virtual ~GainModel() = default;

  virtual double mean_gain() const = 0;
  virtual Regime regime() const = 0;

  // Checks the sign regime (tiny violations from rounding are clamped,
  // real ones throw std::domain_error). c2 = -inf returns c1 + E[W].
  double expected_max(double c1, double c2) const;

 protected:
  virtual double expected_max_impl(double c1, double c2) const = 0;
};

using GainModelPtr = std::shared_ptr<const GainModel>;

// Base for local-objective models, W = -Y with Y >= 0 the insured loss.
// E[max{c1 - Y, c2}] = c2 + E[(delta - Y)^+],  delta = c1 - c2.
class LocalLossModel : public GainModel {
 public:
  double mean_gain() const final { return -mean_loss(); }
  Regime regime() const final { return Regime::Local; }

  virtual double mean_loss() const = 0;
  // E[(delta - Y)^+] for delta >= 0.
  virtual double lower_partial(double delta) const = 0;

 protected:
  double expected_max_impl(double c1, double c2) const final;
};

// Base for global-objective models, W >= 0.
// E[max{c1 + W, c2}] = c1 + E[W] + E[(delta - W)^+],  delta = c2 - c1.
class GlobalGainModel : public GainModel {
 public:
  Regime regime() const final { return Regime::Global; }

  // E[(delta - W)^+] for delta >= 0.
  virtual double lower_partial(double delta) const = 0;

 protected:
  double expected_max_impl(double c1, double c2) const override;
};

}  // namespace mstop

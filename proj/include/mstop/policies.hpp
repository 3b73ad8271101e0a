#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "mstop/gain_model.hpp"
#include "mstop/lda.hpp"
#include "mstop/quadrature.hpp"
#include "mstop/value_table.hpp"

namespace mstop {

// Point masses of a mixed law: (location, probability).
using Atoms = std::vector<std::pair<double, double>>;

// Accumulated-loss policy weights: C0 = P[Z~ = 0], C_m = p_m P[S_m > cap].
struct ALPWeights {
  double C0 = 0.0;
  std::vector<double> Cm;  // index m = 1..m_max stored at m-1
};

// ALP, local objective: Z~ = (Z - cap)^+, W = -Z~.
class ALPLocalModel : public LocalLossModel {
 public:
  ALPLocalModel(const LDAModel& lda, double cap);
  double mean_loss() const override;
  double lower_partial(double delta) const override;

  const ALPWeights& weights() const { return weights_; }
  Atoms atoms() const;               // {(0, C0)}
  double density(double z) const;    // continuous part on (0, inf)
  double exceedance_probability() const { return 1.0 - weights_.C0; }  // P[Z > cap]

 private:
  LDAModel lda_;
  double cap_;
  IGSums sums_;
  std::vector<double> pmf_;
  ALPWeights weights_;
  double mean_loss_;
};

// ALP, global objective: W = Z - Z~ = min{cap, Z}.
class ALPGlobalModel : public GlobalGainModel {
 public:
  ALPGlobalModel(const LDAModel& lda, double cap);
  double mean_gain() const override { return mean_; }
  double lower_partial(double delta) const override;

  Atoms atoms() const;             // {(0, p0), (cap, P[Z > cap])}
  double density(double w) const;  // continuous part on (0, cap)

 private:
  LDAModel lda_;
  double cap_;
  IGSums sums_;
  std::vector<double> pmf_;
  double mean_;
  double atom_cap_;
};

// P[M* = m_star]: index of the first severity whose running sum exceeds the
// attachment point. Does not depend on the number of losses in the year.
double mstar_pmf(int m_star, const LDAModel& lda, double attachment,
                 const QuadratureSpec& quad = {});

// Post-attachment-point policy weights.
// D_{m*,m} = P[M* = m*] p_m (coverage attaches at loss m* in a year with m losses),
// D_m = P[S_m <= attachment] p_m (coverage never attaches).
struct PAPWeights {
  std::vector<double> mstar;              // m* = 1..m_max at m*-1
  std::vector<std::vector<double>> Dmm;   // [m*-1][m-1], zero for m* > m
  std::vector<double> Dm;                 // m = 1..m_max at m-1
};

PAPWeights pap_weights(const LDAModel& lda, double attachment, const QuadratureSpec& quad = {});

// PAP, local objective: Z~ = sum_n X_n 1{S_n <= attachment}.
class PAPLocalModel : public LocalLossModel {
 public:
  PAPLocalModel(const LDAModel& lda, double attachment, const QuadratureSpec& quad = {});
  double mean_loss() const override { return mean_loss_; }
  double lower_partial(double delta) const override;

  const PAPWeights& weights() const { return weights_; }
  Atoms atoms() const;             // {(0, P[Z~ = 0])}
  double density(double z) const;  // continuous part on (0, attachment]

 private:
  double crossing_density(double z) const;  // paths that later cross

  LDAModel lda_;
  double attach_;
  IGSums sums_;
  std::vector<double> pmf_;
  std::vector<double> at_least_;  // P[N >= j]
  PAPWeights weights_;
  QuadratureSpec quad_;
  double atom0_;
  double mean_loss_;
};

// PAP, global objective: W = Z - Z~ = sum_n X_n 1{S_n > attachment}.
class PAPGlobalModel : public GlobalGainModel {
 public:
  PAPGlobalModel(const LDAModel& lda, double attachment, const QuadratureSpec& quad = {});
  double mean_gain() const override { return mean_; }
  double lower_partial(double delta) const override;

  const PAPWeights& weights() const { return weights_; }
  double atom_at_zero() const { return atom0_; }
  double cdf(double w) const;  // P[W <= w]

 private:
  double crossing_weight(int m_star, double x) const;  // P[S_{m*-1} in (A - x, A]]

  LDAModel lda_;
  double attach_;
  IGSums sums_;
  std::vector<double> pmf_;
  PAPWeights weights_;
  QuadratureSpec quad_;
  double atom0_;
  double mean_;
};

// ILP, local objective, on the auxiliary post-insurance compound process.
class ILPLocalModel : public LocalLossModel {
 public:
  explicit ILPLocalModel(const ILPAuxModel& aux);
  double mean_loss() const override;
  double lower_partial(double delta) const override;

  Atoms atoms() const;
  double density(double z) const;
  const ILPAuxModel& aux() const { return aux_; }

 private:
  ILPAuxModel aux_;
  IGSums sums_;
  std::vector<double> pmf_;
};

// Draws of the ILP global gain W = sum_{n<=N} min{X_n, tcl}.
struct EmpiricalGainSample {
  std::vector<double> draws;
  std::uint64_t seed = 0;
  double tcl = 0.0;
};

EmpiricalGainSample ilp_global_sample(const LDAModel& lda, double tcl, std::size_t M,
                                      std::uint64_t seed);

struct EstimateWithError {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Empirical-mean gain model over one stored sample (W >= 0). Every
// (c1, c2) query reuses the same draws.
class EmpiricalGainModel : public GlobalGainModel {
 public:
  explicit EmpiricalGainModel(EmpiricalGainSample sample);
  double mean_gain() const override { return mean_; }
  double lower_partial(double delta) const override;

  EstimateWithError expected_max_with_error(double c1, double c2) const;
  // Fraction of draws with c1 + W >= c2.
  double claim_probability(double delta) const;
  const std::vector<double>& sorted_draws() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  const EmpiricalGainSample& sample() const { return sample_; }
  double mean_stderr() const;

 private:
  std::size_t count_below(double delta) const;  // draws strictly below delta

  EmpiricalGainSample sample_;
  std::vector<double> sorted_;
  std::vector<double> prefix_;     // prefix sums of sorted draws
  std::vector<double> prefix_sq_;  // prefix sums of squares
  double mean_;
};

// Value table on an empirical model plus per-cell standard errors from
// influence-function propagation through the recursion.
struct ValueTableWithError {
  ValueTable table;
  ValueTable stderr_;
};

ValueTableWithError compute_value_table_with_error(const EmpiricalGainModel& model,
                                                   Horizon horizon);

// Dispatch on (policy, objective). ILP global draws a sample of size
// ilp_samples with ilp_seed; ILP local needs an auxiliary model.
GainModelPtr make_gain_model(const LDAModel& lda, const PolicySpec& policy,
                             const ILPAuxModel* ilp_aux = nullptr,
                             std::size_t ilp_samples = 100000, std::uint64_t ilp_seed = 1);

}  // namespace mstop

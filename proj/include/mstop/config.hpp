#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mstop/gain_model.hpp"
#include "mstop/lda.hpp"
#include "mstop/series.hpp"
#include "mstop/value_table.hpp"

namespace mstop {

// Where the moments for a series expansion come from.
struct ApproxSource {
  enum class Kind { Moments, LogNormalCompound, Gamma, PolicySample };
  Kind kind = Kind::Moments;
  MomentSet moments;              // Moments
  double rate = 2.0;              // LogNormalCompound: Poisson rate
  double ln_mu = 1.0;             // LogNormalCompound severity
  double ln_sigma = 0.8;
  double gamma_shape = 2.0;       // Gamma
  double gamma_rate = 1.0;
};

// Everything a command needs, parsed from one JSON document:
// {
//   "model": "lda" | "lognormal",
//   "lognormal": {"mu": 0, "sigma": 1},
//   "frequency": {"rate": 3}, "severity": {"mu": 2, "lambda": 3},
//   "truncation": {"m_max": 40},
//   "policy": {"kind": "ALP", "param": 10}, "objective": "local",
//   "horizon": {"T": 8, "k": 3},
//   "mc": {"samples": 100000, "seed": 1},
//   "approx": {"source": "moments", "mean": .., "variance": .., "mu3": .., "mu4": ..}
// }
// For the ILP policy with the local objective, frequency and severity
// describe the auxiliary post-insurance process.
struct RunConfig {
  enum class ModelKind { LDA, LogNormal };
  ModelKind model = ModelKind::LDA;
  double ln_mu = 0.0;
  double ln_sigma = 1.0;
  LDAModel lda;
  PolicySpec policy;
  Horizon horizon{8, 3};
  std::size_t mc_samples = 100000;
  std::uint64_t mc_seed = 1;
  std::optional<ApproxSource> approx;

  ILPAuxModel ilp_aux() const { return {lda.frequency.rate, lda.severity}; }
};

// ConfigError messages name the offending JSON pointer, or the line and
// column for syntax errors.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Log-normal(0, 1) local model on T = 10, k = 9.
RunConfig lognormal_preset();

GainModelPtr build_gain_model(const RunConfig& config);

}  // namespace mstop

#pragma once

#include <cstdint>
#include <random>

#include "mstop/distributions.hpp"

namespace mstop {

// One reproducible random stream. The engine is seeded from
// (seed, stream) through std::seed_seq, so stream s of a given seed
// is the same no matter which worker consumes it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  double normal();
  int poisson(double rate);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Michael-Schucany-Haas transformation sampler.
double sample_ig(const IGParams& params, RngStream& rng);

double sample_lognormal(double mu, double sigma, RngStream& rng);

}  // namespace mstop

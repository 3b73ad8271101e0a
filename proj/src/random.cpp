#include "mstop/random.hpp"

#include <cmath>

namespace mstop {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::normal() { return normal_(engine_); }

int RngStream::poisson(double rate) {
  std::poisson_distribution<int> dist(rate);
  return dist(engine_);
}

double sample_ig(const IGParams& params, RngStream& rng) {
  const double mu = params.mu;
  const double lam = params.lambda;
  const double nu = rng.normal();
  const double y = nu * nu;
  const double muy = mu * y;
  // Smaller root of the quadratic, in a form free of cancellation.
  const double cand = mu - 2.0 * mu * mu * y / (muy + std::sqrt(4.0 * mu * lam * y + muy * muy));
  const double u = rng.uniform();
  if (u <= mu / (mu + cand)) return cand;
  return mu * mu / cand;
}

double sample_lognormal(double mu, double sigma, RngStream& rng) {
  return std::exp(mu + sigma * rng.normal());
}

}  // namespace mstop

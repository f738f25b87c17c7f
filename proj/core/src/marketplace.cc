#include "spp/marketplace.h"

#include <stdexcept>

namespace spp {

void PurchaseLedger::record(UserId user, double price, double sigma) {
  entries_.push_back({user, price, sigma});
  total_spent_ += price;
}

double noise_sigma(double valuation, double price,
                   const PricingParams& pricing) {
  if (!(price > 0.0)) throw std::invalid_argument("price must be positive");
  if (!(valuation > 0.0)) {
    throw std::invalid_argument("valuation must be positive");
  }
  if (price >= valuation) return 0.0;
  return valuation / price * pricing.sigma_scale;
}

double sample_valuation(const ValuationDistribution& dist, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, dist.scale);
  for (;;) {
    const double rho = unif(rng);
    const double nu = unif(rng);
    const double v = rho * nu;
    if (v > 0.0) return v;
  }
}

Observation sell(const User& user, double price, const PricingParams& pricing,
                 Rng& rng, PurchaseLedger& ledger) {
  const double sigma = noise_sigma(user.valuation, price, pricing);
  Observation obs{user.id, user.location, sigma, price};
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    obs.z.x += noise(rng);
    obs.z.y += noise(rng);
  }
  ledger.record(user.id, price, sigma);
  return obs;
}

std::vector<User> make_users(std::span<const LocatedId> points,
                             const ValuationDistribution& dist,
                             std::uint64_t seed) {
  Rng rng = make_stream({seed, 0x76616c75ULL});
  std::vector<User> users;
  users.reserve(points.size());
  for (const auto& p : points) {
    users.push_back({p.id, p.location, sample_valuation(dist, rng)});
  }
  return users;
}

}  // namespace spp

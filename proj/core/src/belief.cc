#include "spp/belief.h"

#include <cmath>
#include <stdexcept>

namespace spp {

bool BeliefState::ingest(const Observation& obs) {
  auto it = held_.find(obs.user_id);
  if (it != held_.end() && !(obs.sigma < it->second.obs.sigma)) return false;
  const double p = gaussian_prob_in_region(obs.z, obs.sigma, region_);
  if (it == held_.end()) {
    held_.emplace(obs.user_id, Held{obs, p});
    expected_count_ += p;
  } else {
    expected_count_ += p - it->second.p;
    it->second = Held{obs, p};
  }
  return true;
}

double BeliefState::probability(UserId user) const {
  auto it = held_.find(user);
  return it == held_.end() ? 0.0 : it->second.p;
}

const Observation* BeliefState::held(UserId user) const {
  auto it = held_.find(user);
  return it == held_.end() ? nullptr : &it->second.obs;
}

double BeliefState::recompute_expected_count() const {
  double total = 0.0;
  for (const auto& [id, h] : held_) {
    total += gaussian_prob_in_region(h.obs.z, h.obs.sigma, region_);
  }
  return total;
}

double expected_posterior_prob(const GeoPoint& z, double sigma,
                               double sigma_next, const Region& region) {
  const double spread =
      std::sqrt(sigma * sigma + 2.0 * sigma_next * sigma_next);
  return gaussian_prob_in_region(z, spread, region);
}

double eip(const Observation& obs, double next_price, double valuation,
           const Region& region, double beta, const PricingParams& pricing) {
  if (!(next_price > 0.0)) {
    throw std::invalid_argument("next_price must be positive");
  }
  const double sigma_next = noise_sigma(valuation, next_price, pricing);
  const double p_now = gaussian_prob_in_region(obs.z, obs.sigma, region);
  const double p_next =
      expected_posterior_prob(obs.z, obs.sigma, sigma_next, region);
  return beta * (p_next - p_now) - next_price;
}

}  // namespace spp

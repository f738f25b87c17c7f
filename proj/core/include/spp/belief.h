#pragma once

#include <unordered_map>

#include "spp/geo.h"
#include "spp/marketplace.h"

namespace spp {

// Payoff of opening: beta per user in the region minus a fixed cost.
struct ProfitModel {
  double beta = 100.0;
  double fixed_cost = 40'000.0;

  static ProfitModel from_min_users(double beta, double min_users) {
    return {beta, beta * min_users};
  }
  double min_users() const { return fixed_cost / beta; }
};

// Buyer's view of one region: the most accurate observation held per user,
// its in-region probability, and their running sum.
class BeliefState {
 public:
  explicit BeliefState(const Region& region) : region_(region) {}

  // Keeps `obs` only if the user is unseen or obs is strictly more accurate.
  // Returns whether the belief changed.
  bool ingest(const Observation& obs);

  const Region& region() const { return region_; }
  double expected_count() const { return expected_count_; }
  size_t size() const { return held_.size(); }

  // p_i of a user; 0 for a user never purchased.
  double probability(UserId user) const;
  const Observation* held(UserId user) const;

  // Sum of p_i recomputed from scratch, for drift audits.
  double recompute_expected_count() const;
  // Replaces the running sum with the recomputed one.
  void resync() { expected_count_ = recompute_expected_count(); }

 private:
  struct Held {
    Observation obs;
    double p;
  };

  Region region_;
  std::unordered_map<UserId, Held> held_;
  double expected_count_ = 0.0;
};

inline double expected_open_profit(const BeliefState& belief,
                                   const ProfitModel& model) {
  return model.beta * belief.expected_count() - model.fixed_cost;
}

// Strict: a zero expected profit does not open.
inline bool opening_condition(const BeliefState& belief,
                              const ProfitModel& model) {
  return expected_open_profit(belief, model) > 0.0;
}

// Expected in-region probability after replacing an observation (z, sigma)
// with a fresh one of accuracy sigma_next. The next observation is
// distributed N(z, (sigma^2 + sigma_next^2) I) and is itself read with
// spread sigma_next, so the nested expectation is the rectangle mass of
// N(z, (sigma^2 + 2 sigma_next^2) I).
double expected_posterior_prob(const GeoPoint& z, double sigma,
                               double sigma_next, const Region& region);

// Expected incremental profit of re-buying `obs`'s user at `next_price`.
// Throws std::invalid_argument for non-positive next_price.
double eip(const Observation& obs, double next_price, double valuation,
           const Region& region, double beta, const PricingParams& pricing);

}  // namespace spp

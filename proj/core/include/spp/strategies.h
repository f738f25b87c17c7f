#pragma once

#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spp/belief.h"
#include "spp/geo.h"
#include "spp/marketplace.h"
#include "spp/rng.h"

namespace spp {

enum class Decision { kOpen, kCancel };

const char* to_string(Decision d);

// Candidate margin that admits every user in the market.
inline constexpr double kWholeMarket = std::numeric_limits<double>::infinity();

struct StrategyConfig {
  double start_price = 0.001;
  double increment = 2.0;
  double terminal_k = 2.0;
  double candidate_margin = 10'000.0;
  double fmc_fraction = 0.01;

  // Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

// Immutable seller population shared by every run of an experiment.
class Market {
 public:
  // Users are re-sorted by id; ids must be unique. `extent` bounds the
  // candidate box when the margin is kWholeMarket; if omitted it is the
  // bounding box of the user locations.
  explicit Market(std::vector<User> users,
                  std::optional<BoundingBox> extent = std::nullopt);

  const std::vector<User>& users() const { return users_; }
  const User& user(UserId id) const;
  const BoundingBox& extent() const { return extent_; }
  size_t size() const { return users_.size(); }

 private:
  std::vector<User> users_;
  std::unordered_map<UserId, size_t> index_;
  BoundingBox extent_;
};

// One strategy applied to one region.
class RegionRun {
 public:
  RegionRun(const Region& region, std::vector<UserId> candidates)
      : region_(region), candidates_(std::move(candidates)), belief_(region) {}

  const Region& region() const { return region_; }
  const std::vector<UserId>& candidates() const { return candidates_; }
  const BeliefState& belief() const { return belief_; }
  const PurchaseLedger& ledger() const { return ledger_; }
  const std::optional<Decision>& decision() const { return decision_; }

  BeliefState& belief() { return belief_; }
  PurchaseLedger& ledger() { return ledger_; }

  // The final action; throws std::logic_error if called twice.
  void decide(Decision d);

 private:
  Region region_;
  std::vector<UserId> candidates_;
  BeliefState belief_;
  PurchaseLedger ledger_;
  std::optional<Decision> decision_;
};

// Ids of users whose true location lies in `region` grown by `margin` on
// every side (half-open), ascending.
std::vector<UserId> candidate_set(const Market& market, const Region& region,
                                  double margin);

// Area of the box candidates are drawn from.
double candidate_box_area(const Market& market, const Region& region,
                          double margin);

// Prices min(from * h^k, cap) for k = 1, 2, ... up to and including cap.
// Empty when from >= cap.
std::vector<double> price_ladder(double from, double cap, double increment);

struct PricedAction {
  double price;
  double eip;
};

// Highest-EIP rung of the price ladder above obs.price_paid, or nothing when
// exact data is already held. Ties keep the cheaper price.
std::optional<PricedAction> best_next_action(const Observation& obs,
                                             double valuation,
                                             const Region& region, double beta,
                                             const PricingParams& pricing,
                                             double increment);

// True when, on each axis, z is at least k*sigma inside both edges or at
// least k*sigma outside the nearest one. sigma == 0 is always terminal.
bool is_terminal(const Observation& obs, const Region& region, double k);

RegionRun run_sip(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng);

RegionRun run_sip_t(const Market& market, const Region& region,
                    const ProfitModel& model, const PricingParams& pricing,
                    const StrategyConfig& cfg, Rng& rng);

RegionRun run_oracle(const Market& market, const Region& region,
                     const ProfitModel& model);

// Grade of a full-price purchase under a uniform location prior.
inline double poi_grade(double beta, double uniform_prob, double valuation) {
  return beta * uniform_prob - valuation;
}

RegionRun run_poi(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng);

RegionRun run_fmc(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng, double fraction);

enum class StrategyKind { kOracle, kSip, kSipT, kPoi, kFmc };

struct StrategySpec {
  StrategyKind kind = StrategyKind::kOracle;
  double fmc_fraction = 0.0;  // only for kFmc

  // "oracle", "sip", "sip-t", "poi", "fmc-<percent>" (e.g. fmc-0.1).
  std::string name() const;
};

RegionRun run_strategy(const StrategySpec& spec, const Market& market,
                       const Region& region, const ProfitModel& model,
                       const PricingParams& pricing, const StrategyConfig& cfg,
                       Rng& rng);

}  // namespace spp

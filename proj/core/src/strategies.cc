#include "spp/strategies.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

namespace spp {

const char* to_string(Decision d) {
  return d == Decision::kOpen ? "open" : "cancel";
}

void StrategyConfig::validate() const {
  if (!(start_price > 0.0)) throw std::invalid_argument("start_price");
  if (!(increment > 1.0)) throw std::invalid_argument("increment");
  if (!(terminal_k > 0.0)) throw std::invalid_argument("terminal_k");
  if (!(candidate_margin >= 0.0)) {
    throw std::invalid_argument("candidate_margin");
  }
  if (!(fmc_fraction > 0.0)) throw std::invalid_argument("fmc_fraction");
}

Market::Market(std::vector<User> users, std::optional<BoundingBox> extent)
    : users_(std::move(users)) {
  std::sort(users_.begin(), users_.end(),
            [](const User& a, const User& b) { return a.id < b.id; });
  index_.reserve(users_.size());
  for (size_t i = 0; i < users_.size(); ++i) {
    if (!index_.emplace(users_[i].id, i).second) {
      throw std::invalid_argument("duplicate user id " +
                                  std::to_string(users_[i].id));
    }
  }
  if (extent) {
    extent_ = *extent;
  } else if (!users_.empty()) {
    extent_ = {users_[0].location.x, users_[0].location.y,
               users_[0].location.x, users_[0].location.y};
    for (const auto& u : users_) {
      extent_.x_min = std::min(extent_.x_min, u.location.x);
      extent_.y_min = std::min(extent_.y_min, u.location.y);
      extent_.x_max = std::max(extent_.x_max, u.location.x);
      extent_.y_max = std::max(extent_.y_max, u.location.y);
    }
  }
}

const User& Market::user(UserId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("unknown user id " + std::to_string(id));
  }
  return users_[it->second];
}

void RegionRun::decide(Decision d) {
  if (decision_) throw std::logic_error("region run already decided");
  decision_ = d;
}

std::vector<UserId> candidate_set(const Market& market, const Region& region,
                                  double margin) {
  std::vector<UserId> ids;
  const bool everyone = std::isinf(margin);
  const double x0 = region.x_min - margin;
  const double x1 = region.x_max() + margin;
  const double y0 = region.y_min - margin;
  const double y1 = region.y_max() + margin;
  for (const auto& u : market.users()) {
    const auto& p = u.location;
    if (everyone || (x0 <= p.x && p.x < x1 && y0 <= p.y && p.y < y1)) {
      ids.push_back(u.id);
    }
  }
  return ids;
}

double candidate_box_area(const Market& market, const Region& region,
                          double margin) {
  if (std::isinf(margin)) return market.extent().area();
  const double side = region.side + 2.0 * margin;
  return side * side;
}

std::vector<double> price_ladder(double from, double cap, double increment) {
  std::vector<double> rungs;
  double q = from;
  while (q < cap) {
    q = std::min(q * increment, cap);
    rungs.push_back(q);
  }
  return rungs;
}

std::optional<PricedAction> best_next_action(const Observation& obs,
                                             double valuation,
                                             const Region& region, double beta,
                                             const PricingParams& pricing,
                                             double increment) {
  std::optional<PricedAction> best;
  for (double q : price_ladder(obs.price_paid, valuation, increment)) {
    const double v = eip(obs, q, valuation, region, beta, pricing);
    if (!best || v > best->eip) best = PricedAction{q, v};
  }
  return best;
}

bool is_terminal(const Observation& obs, const Region& region, double k) {
  if (obs.sigma <= 0.0) return true;
  const double margin = k * obs.sigma;
  for (const auto& axis : distance_to_edges(obs.z, region)) {
    if (axis.inside()) {
      if (std::min(axis.to_lower, axis.to_upper) < margin) return false;
    } else if (axis.nearest_edge() < margin) {
      return false;
    }
  }
  return true;
}

namespace {

struct QueuedAction {
  UserId user;
  PricedAction action;
};

// Max-EIP first; equal EIPs pop the lowest user id.
struct LowerPriority {
  bool operator()(const QueuedAction& a, const QueuedAction& b) const {
    if (a.action.eip != b.action.eip) return a.action.eip < b.action.eip;
    return a.user > b.user;
  }
};

using ActionQueue =
    std::priority_queue<QueuedAction, std::vector<QueuedAction>, LowerPriority>;

RegionRun run_probing(const Market& market, const Region& region,
                      const ProfitModel& model, const PricingParams& pricing,
                      const StrategyConfig& cfg, Rng& rng, bool terminals) {
  RegionRun run(region, candidate_set(market, region, cfg.candidate_margin));
  BeliefState& belief = run.belief();

  // Pure exploration: everyone at the starting price.
  for (UserId id : run.candidates()) {
    belief.ingest(sell(market.user(id), cfg.start_price, pricing, rng,
                       run.ledger()));
    if (opening_condition(belief, model)) {
      run.decide(Decision::kOpen);
      return run;
    }
  }

  const auto next_action = [&](UserId id) {
    return best_next_action(*belief.held(id), market.user(id).valuation,
                            region, model.beta, pricing, cfg.increment);
  };

  ActionQueue queue;
  for (UserId id : run.candidates()) {
    if (auto a = next_action(id)) queue.push({id, *a});
  }

  while (!queue.empty()) {
    const QueuedAction top = queue.top();
    if (!terminals && top.action.eip <= 0.0) break;
    queue.pop();

    const Observation obs = sell(market.user(top.user), top.action.price,
                                 pricing, rng, run.ledger());
    belief.ingest(obs);
    if (opening_condition(belief, model)) {
      run.decide(Decision::kOpen);
      return run;
    }
    if (terminals && is_terminal(obs, region, cfg.terminal_k)) continue;
    if (auto a = next_action(top.user)) queue.push({top.user, *a});
  }
  run.decide(Decision::kCancel);
  return run;
}

}  // namespace

RegionRun run_sip(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng) {
  return run_probing(market, region, model, pricing, cfg, rng, false);
}

RegionRun run_sip_t(const Market& market, const Region& region,
                    const ProfitModel& model, const PricingParams& pricing,
                    const StrategyConfig& cfg, Rng& rng) {
  return run_probing(market, region, model, pricing, cfg, rng, true);
}

RegionRun run_oracle(const Market& market, const Region& region,
                     const ProfitModel& model) {
  RegionRun run(region, {});
  long n_true = 0;
  for (const auto& u : market.users()) {
    if (region.contains(u.location)) ++n_true;
  }
  run.decide(model.beta * static_cast<double>(n_true) - model.fixed_cost > 0.0
                 ? Decision::kOpen
                 : Decision::kCancel);
  return run;
}

RegionRun run_poi(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng) {
  RegionRun run(region, candidate_set(market, region, cfg.candidate_margin));
  const double box = candidate_box_area(market, region, cfg.candidate_margin);
  const double uniform_prob = box > 0.0 ? std::min(1.0, region.area() / box)
                                        : 0.0;

  struct Graded {
    UserId id;
    double grade;
  };
  std::vector<Graded> ranked;
  ranked.reserve(run.candidates().size());
  for (UserId id : run.candidates()) {
    ranked.push_back(
        {id, poi_grade(model.beta, uniform_prob, market.user(id).valuation)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Graded& a, const Graded& b) {
                     return a.grade > b.grade;
                   });

  for (const auto& g : ranked) {
    if (g.grade <= 0.0 || opening_condition(run.belief(), model)) break;
    const User& u = market.user(g.id);
    run.belief().ingest(sell(u, u.valuation, pricing, rng, run.ledger()));
  }
  run.decide(opening_condition(run.belief(), model) ? Decision::kOpen
                                                    : Decision::kCancel);
  return run;
}

RegionRun run_fmc(const Market& market, const Region& region,
                  const ProfitModel& model, const PricingParams& pricing,
                  const StrategyConfig& cfg, Rng& rng, double fraction) {
  if (!(fraction > 0.0)) throw std::invalid_argument("fmc fraction");
  RegionRun run(region, candidate_set(market, region, cfg.candidate_margin));
  const double budget = fraction * model.fixed_cost;
  if (!run.candidates().empty() && budget > 0.0) {
    const double price =
        budget / static_cast<double>(run.candidates().size());
    for (UserId id : run.candidates()) {
      run.belief().ingest(
          sell(market.user(id), price, pricing, rng, run.ledger()));
    }
  }
  run.decide(opening_condition(run.belief(), model) ? Decision::kOpen
                                                    : Decision::kCancel);
  return run;
}

std::string StrategySpec::name() const {
  switch (kind) {
    case StrategyKind::kOracle:
      return "oracle";
    case StrategyKind::kSip:
      return "sip";
    case StrategyKind::kSipT:
      return "sip-t";
    case StrategyKind::kPoi:
      return "poi";
    case StrategyKind::kFmc: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "fmc-%g", fmc_fraction * 100.0);
      return buf;
    }
  }
  return "unknown";
}

RegionRun run_strategy(const StrategySpec& spec, const Market& market,
                       const Region& region, const ProfitModel& model,
                       const PricingParams& pricing, const StrategyConfig& cfg,
                       Rng& rng) {
  switch (spec.kind) {
    case StrategyKind::kOracle:
      return run_oracle(market, region, model);
    case StrategyKind::kSip:
      return run_sip(market, region, model, pricing, cfg, rng);
    case StrategyKind::kSipT:
      return run_sip_t(market, region, model, pricing, cfg, rng);
    case StrategyKind::kPoi:
      return run_poi(market, region, model, pricing, cfg, rng);
    case StrategyKind::kFmc:
      return run_fmc(market, region, model, pricing, cfg, rng,
                     spec.fmc_fraction);
  }
  throw std::invalid_argument("unknown strategy kind");
}

}  // namespace spp

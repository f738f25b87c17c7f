#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spp/belief.h"
#include "spp/strategies.h"

namespace spp {

struct RegionOutcome {
  size_t region_id = 0;
  std::string strategy;
  Decision decision = Decision::kCancel;
  double spent = 0.0;
  long true_n = 0;
  double realized_profit = 0.0;
  size_t purchases = 0;
};

struct MetricsReport {
  std::string strategy;
  double arp = 0.0;
  double mrp = 0.0;
  double recall = 1.0;
  long positives = 0;
  size_t region_count = 0;
  double total_spent = 0.0;
  // Recall is reported as 1.0 when there is nothing to find.
  bool no_positives = true;
};

long ground_truth_count(const Market& market, const Region& region);

// Ground-truth label of a region: opening would make money.
inline bool is_positive(long true_n, const ProfitModel& model) {
  return model.beta * static_cast<double>(true_n) - model.fixed_cost > 0.0;
}

// Decision payoff under ground truth minus data spend.
double realized_profit(Decision decision, long true_n, double spent,
                       const ProfitModel& model);

// Midpoint of the two central values for even counts. Requires non-empty.
double median(std::vector<double> values);

// Aggregates the outcomes of one strategy (rows of other strategies are
// ignored).
MetricsReport summarize(std::span<const RegionOutcome> outcomes,
                        const std::string& strategy, const ProfitModel& model);

struct EvaluationOptions {
  unsigned threads = 1;
  bool keep_runs = false;
};

struct Evaluation {
  // Ordered by region id, then by position in the strategy list.
  std::vector<RegionOutcome> outcomes;
  // One per strategy, in strategy-list order.
  std::vector<MetricsReport> metrics;
  // Parallel to `outcomes` when EvaluationOptions::keep_runs is set.
  std::vector<RegionRun> runs;
};

// Seed of the noise stream for one (region, strategy) pair. Independent of
// scheduling and of which other strategies are evaluated.
std::uint64_t run_stream_seed(std::uint64_t seed, size_t region_id,
                              const std::string& strategy);

// Runs every strategy on every region. Throws std::invalid_argument on an
// empty grid.
Evaluation evaluate(const Market& market, std::span<const Region> grid,
                    std::span<const StrategySpec> strategies,
                    const ProfitModel& model, const PricingParams& pricing,
                    const StrategyConfig& cfg, std::uint64_t seed,
                    const EvaluationOptions& options = {});

}  // namespace spp

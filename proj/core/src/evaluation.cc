#include "spp/evaluation.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace spp {

long ground_truth_count(const Market& market, const Region& region) {
  return static_cast<long>(std::count_if(
      market.users().begin(), market.users().end(),
      [&](const User& u) { return region.contains(u.location); }));
}

double realized_profit(Decision decision, long true_n, double spent,
                       const ProfitModel& model) {
  const double payoff =
      decision == Decision::kOpen
          ? model.beta * static_cast<double>(true_n) - model.fixed_cost
          : 0.0;
  return payoff - spent;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

MetricsReport summarize(std::span<const RegionOutcome> outcomes,
                        const std::string& strategy,
                        const ProfitModel& model) {
  MetricsReport r;
  r.strategy = strategy;
  std::vector<double> profits;
  long found = 0;
  for (const auto& o : outcomes) {
    if (o.strategy != strategy) continue;
    profits.push_back(o.realized_profit);
    r.total_spent += o.spent;
    if (is_positive(o.true_n, model)) {
      ++r.positives;
      if (o.decision == Decision::kOpen) ++found;
    }
  }
  r.region_count = profits.size();
  if (!profits.empty()) {
    double sum = 0.0;
    for (double p : profits) sum += p;
    r.arp = sum / static_cast<double>(profits.size());
    r.mrp = median(std::move(profits));
  }
  r.no_positives = r.positives == 0;
  r.recall = r.no_positives ? 1.0
                            : static_cast<double>(found) /
                                  static_cast<double>(r.positives);
  return r;
}

std::uint64_t run_stream_seed(std::uint64_t seed, size_t region_id,
                              const std::string& strategy) {
  // FNV-1a over the strategy name.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : strategy) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return stream_seed({seed, static_cast<std::uint64_t>(region_id), h});
}

Evaluation evaluate(const Market& market, std::span<const Region> grid,
                    std::span<const StrategySpec> strategies,
                    const ProfitModel& model, const PricingParams& pricing,
                    const StrategyConfig& cfg, std::uint64_t seed,
                    const EvaluationOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  cfg.validate();

  std::vector<std::string> names;
  for (const auto& s : strategies) names.push_back(s.name());

  std::vector<long> truth(grid.size());
  for (size_t r = 0; r < grid.size(); ++r) {
    truth[r] = ground_truth_count(market, grid[r]);
  }

  const size_t jobs = grid.size() * strategies.size();
  Evaluation result;
  result.outcomes.resize(jobs);
  std::vector<std::optional<RegionRun>> runs(options.keep_runs ? jobs : 0);

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
      try {
        const size_t r = j / strategies.size();
        const size_t s = j % strategies.size();
        Rng rng(run_stream_seed(seed, r, names[s]));
        RegionRun run = run_strategy(strategies[s], market, grid[r], model,
                                     pricing, cfg, rng);
        RegionOutcome& o = result.outcomes[j];
        o.region_id = r;
        o.strategy = names[s];
        o.decision = run.decision().value_or(Decision::kCancel);
        o.spent = run.ledger().total_spent();
        o.true_n = truth[r];
        o.purchases = run.ledger().size();
        o.realized_profit =
            realized_profit(o.decision, o.true_n, o.spent, model);
        if (options.keep_runs) runs[j].emplace(std::move(run));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads,
                                      static_cast<unsigned>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& name : names) {
    result.metrics.push_back(summarize(result.outcomes, name, model));
  }
  if (options.keep_runs) {
    result.runs.reserve(jobs);
    for (auto& r : runs) result.runs.push_back(std::move(*r));
  }
  return result;
}

}  // namespace spp

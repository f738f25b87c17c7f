#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spp/evaluation.h"
#include "spp/strategies.h"

namespace spp {

// A bad configuration value; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

// One experiment. The fixed cost is always beta * min_users.
struct ExperimentConfig {
  std::string dataset_path;
  double beta = 100.0;
  double min_users = 400.0;
  double privacy_scale = 3.0;
  double region_side = 5'000.0;
  double start_price = 0.001;
  double increment = 2.0;
  double sigma_scale = 20.0;
  double terminal_k = 2.0;
  // Unset means twice the region side; kWholeMarket admits everyone.
  std::optional<double> candidate_margin;
  std::vector<double> fmc_fractions{0.001, 0.01, 0.02};
  std::vector<std::string> strategies{"oracle", "sip", "sip-t", "poi", "fmc"};
  std::vector<std::uint64_t> seeds{1};
  std::optional<SweepSpec> sweep;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;

  // Throws ConfigError.
  void validate() const;

  double resolved_margin() const {
    return candidate_margin.value_or(2.0 * region_side);
  }
  ProfitModel profit_model() const {
    return ProfitModel::from_min_users(beta, min_users);
  }
  PricingParams pricing() const { return {sigma_scale}; }
  StrategyConfig strategy_config() const;
  // Strategy names expanded in canonical order (fmc once per fraction).
  std::vector<StrategySpec> strategy_specs() const;

  // Copy with one sweepable parameter replaced. Throws ConfigError for an
  // unknown parameter name.
  ExperimentConfig with_param(const std::string& param, double value) const;
};

// Names accepted in ExperimentConfig::sweep.param.
const std::vector<std::string>& sweepable_params();

std::string config_to_json(const ExperimentConfig& cfg);
// Missing keys take defaults; unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

inline constexpr const char* kSummaryHeader =
    "strategy,sweep_param,sweep_value,seed,arp,mrp,recall,regions,positives,"
    "total_spent";
inline constexpr const char* kRegionsHeader =
    "region_id,x_min,y_min,side,true_n,strategy,decision,spent,purchases,"
    "realized_profit";

std::string format_regions_csv(std::span<const Region> grid,
                               std::span<const RegionOutcome> outcomes);

struct RunOptions {
  std::filesystem::path out_dir;
  unsigned threads = 1;
};

struct RunReport {
  std::vector<std::filesystem::path> region_files;
  size_t summary_rows = 0;
};

// Evaluates every sweep value x seed and writes regions_<sweep>_<seed>.csv,
// summary.csv and manifest.json under options.out_dir. Throws ConfigError
// (bad config or missing dataset) or std::runtime_error.
RunReport run_experiment(const ExperimentConfig& cfg,
                         const RunOptions& options);

struct AggregateStat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct AggregateRow {
  std::string strategy;
  std::string sweep_param;
  std::string sweep_value;
  size_t seeds = 0;
  AggregateStat arp;
  AggregateStat mrp;
  AggregateStat recall;
};

// Cross-seed statistics per (strategy, sweep value) from <dir>/summary.csv,
// in first-appearance order. Throws std::runtime_error when there is nothing
// to aggregate.
std::vector<AggregateRow> aggregate_runs(const std::filesystem::path& dir);

std::string format_report_csv(std::span<const AggregateRow> rows);
std::string format_report_json(std::span<const AggregateRow> rows);

// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

std::string library_version();

}  // namespace spp

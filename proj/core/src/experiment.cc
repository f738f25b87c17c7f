#include "spp/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "spp/ingest.h"

#ifndef SPP_VERSION
#define SPP_VERSION "unknown"
#endif

namespace spp {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kStrategyNames{"oracle", "sip", "sip-t", "poi",
                                              "fmc"};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void require_positive(const char* field, double v) {
  if (!(v > 0.0) || std::isnan(v)) throw ConfigError(field, "must be positive");
}

template <typename T>
T get_field(const json& j, const char* field) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("wrong type (") + e.what() + ")");
  }
}

double& param_ref(ExperimentConfig& cfg, const std::string& param) {
  if (param == "beta") return cfg.beta;
  if (param == "min_users") return cfg.min_users;
  if (param == "privacy_scale") return cfg.privacy_scale;
  if (param == "region_side") return cfg.region_side;
  if (param == "start_price") return cfg.start_price;
  if (param == "increment") return cfg.increment;
  if (param == "sigma_scale") return cfg.sigma_scale;
  if (param == "terminal_k") return cfg.terminal_k;
  throw ConfigError("sweep", "unknown parameter '" + param + "'");
}

}  // namespace

const std::vector<std::string>& sweepable_params() {
  static const std::vector<std::string> params{
      "beta",      "min_users",  "privacy_scale", "region_side",
      "start_price", "increment", "sigma_scale",  "terminal_k",
      "candidate_margin"};
  return params;
}

void ExperimentConfig::validate() const {
  if (dataset_path.empty()) throw ConfigError("dataset_path", "is empty");
  require_positive("beta", beta);
  require_positive("min_users", min_users);
  require_positive("privacy_scale", privacy_scale);
  require_positive("region_side", region_side);
  require_positive("start_price", start_price);
  require_positive("sigma_scale", sigma_scale);
  require_positive("terminal_k", terminal_k);
  if (!(increment > 1.0)) throw ConfigError("increment", "must exceed 1");
  if (candidate_margin && !(*candidate_margin >= 0.0)) {
    throw ConfigError("candidate_margin", "must be non-negative");
  }
  if (strategies.empty()) throw ConfigError("strategies", "is empty");
  for (const auto& s : strategies) {
    if (std::find(kStrategyNames.begin(), kStrategyNames.end(), s) ==
        kStrategyNames.end()) {
      throw ConfigError("strategies", "unknown strategy '" + s + "'");
    }
  }
  const bool wants_fmc = std::find(strategies.begin(), strategies.end(),
                                   "fmc") != strategies.end();
  if (wants_fmc && fmc_fractions.empty()) {
    throw ConfigError("fmc_fractions", "is empty");
  }
  for (double f : fmc_fractions) require_positive("fmc_fractions", f);
  if (seeds.empty()) throw ConfigError("seeds", "is empty");
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep", "has no values");
    for (double v : sweep->values) {
      ExperimentConfig probe = with_param(sweep->param, v);
      probe.sweep.reset();
      try {
        probe.validate();
      } catch (const ConfigError& e) {
        throw ConfigError("sweep", e.what());
      }
    }
  }
}

StrategyConfig ExperimentConfig::strategy_config() const {
  StrategyConfig sc;
  sc.start_price = start_price;
  sc.increment = increment;
  sc.terminal_k = terminal_k;
  sc.candidate_margin = resolved_margin();
  if (!fmc_fractions.empty()) sc.fmc_fraction = fmc_fractions.front();
  return sc;
}

std::vector<StrategySpec> ExperimentConfig::strategy_specs() const {
  std::vector<StrategySpec> specs;
  const auto has = [this](const char* name) {
    return std::find(strategies.begin(), strategies.end(), name) !=
           strategies.end();
  };
  if (has("oracle")) specs.push_back({StrategyKind::kOracle});
  if (has("sip")) specs.push_back({StrategyKind::kSip});
  if (has("sip-t")) specs.push_back({StrategyKind::kSipT});
  if (has("poi")) specs.push_back({StrategyKind::kPoi});
  if (has("fmc")) {
    for (double f : fmc_fractions) specs.push_back({StrategyKind::kFmc, f});
  }
  return specs;
}

ExperimentConfig ExperimentConfig::with_param(const std::string& param,
                                              double value) const {
  ExperimentConfig out = *this;
  if (param == "candidate_margin") {
    out.candidate_margin = value;
  } else {
    param_ref(out, param) = value;
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["dataset_path"] = cfg.dataset_path;
  j["beta"] = cfg.beta;
  j["min_users"] = cfg.min_users;
  j["privacy_scale"] = cfg.privacy_scale;
  j["region_side"] = cfg.region_side;
  j["start_price"] = cfg.start_price;
  j["increment"] = cfg.increment;
  j["sigma_scale"] = cfg.sigma_scale;
  j["terminal_k"] = cfg.terminal_k;
  if (!cfg.candidate_margin) {
    j["candidate_margin"] = nullptr;
  } else if (std::isinf(*cfg.candidate_margin)) {
    j["candidate_margin"] = "all";
  } else {
    j["candidate_margin"] = *cfg.candidate_margin;
  }
  j["fmc_fractions"] = cfg.fmc_fractions;
  j["strategies"] = cfg.strategies;
  j["seeds"] = cfg.seeds;
  if (cfg.sweep) {
    j["sweep"] = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
  } else {
    j["sweep"] = nullptr;
  }
  return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "dataset_path") {
      cfg.dataset_path = get_field<std::string>(value, k);
    } else if (key == "beta" || key == "min_users" || key == "privacy_scale" ||
               key == "region_side" || key == "start_price" ||
               key == "increment" || key == "sigma_scale" ||
               key == "terminal_k") {
      if (!value.is_number()) throw ConfigError(key, "must be a number");
      param_ref(cfg, key) = value.get<double>();
    } else if (key == "candidate_margin") {
      if (value.is_null()) {
        cfg.candidate_margin.reset();
      } else if (value.is_string() && value.get<std::string>() == "all") {
        cfg.candidate_margin = kWholeMarket;
      } else if (value.is_number()) {
        cfg.candidate_margin = value.get<double>();
      } else {
        throw ConfigError(key, "must be a number, null or \"all\"");
      }
    } else if (key == "fmc_fractions") {
      cfg.fmc_fractions = get_field<std::vector<double>>(value, k);
    } else if (key == "strategies") {
      cfg.strategies = get_field<std::vector<std::string>>(value, k);
    } else if (key == "seeds") {
      cfg.seeds = get_field<std::vector<std::uint64_t>>(value, k);
    } else if (key == "sweep") {
      if (value.is_null()) {
        cfg.sweep.reset();
      } else {
        if (!value.is_object() || !value.contains("param") ||
            !value.contains("values")) {
          throw ConfigError(key, "must be {\"param\": ..., \"values\": [...]}");
        }
        cfg.sweep = SweepSpec{
            get_field<std::string>(value["param"], k),
            get_field<std::vector<double>>(value["values"], k)};
      }
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string format_regions_csv(std::span<const Region> grid,
                               std::span<const RegionOutcome> outcomes) {
  std::string out = kRegionsHeader;
  out += '\n';
  for (const auto& o : outcomes) {
    const Region& r = grid[o.region_id];
    out += std::to_string(o.region_id) + ',' + fixed6(r.x_min) + ',' +
           fixed6(r.y_min) + ',' + fixed6(r.side) + ',' +
           std::to_string(o.true_n) + ',' + o.strategy + ',' +
           to_string(o.decision) + ',' + fixed6(o.spent) + ',' +
           std::to_string(o.purchases) + ',' + fixed6(o.realized_profit) +
           '\n';
  }
  return out;
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string library_version() { return SPP_VERSION; }

RunReport run_experiment(const ExperimentConfig& cfg,
                         const RunOptions& options) {
  cfg.validate();
  if (!std::filesystem::exists(cfg.dataset_path)) {
    throw ConfigError("dataset_path", "not found: " + cfg.dataset_path);
  }
  const Dataset dataset = read_snapshot(cfg.dataset_path);
  std::filesystem::create_directories(options.out_dir);

  const std::string sweep_param = cfg.sweep ? cfg.sweep->param : "";
  const std::vector<double> values =
      cfg.sweep ? cfg.sweep->values
                : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};

  RunReport report;
  std::ofstream summary(options.out_dir / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write summary.csv");
  summary << kSummaryHeader << '\n';

  for (double value : values) {
    const ExperimentConfig point =
        cfg.sweep ? cfg.with_param(sweep_param, value) : cfg;
    const std::string value_label = cfg.sweep ? compact(value) : "";
    const std::string tag =
        cfg.sweep ? sweep_param + "-" + value_label : "default";

    const auto grid = make_grid(dataset.grid_extent, point.region_side);
    if (grid.empty()) {
      throw ConfigError("region_side", "exceeds the dataset grid extent");
    }
    const auto specs = point.strategy_specs();
    for (std::uint64_t seed : point.seeds) {
      Market market(make_users(dataset.users, {point.privacy_scale}, seed),
                    dataset.grid_extent);
      const Evaluation eval =
          evaluate(market, grid, specs, point.profit_model(), point.pricing(),
                   point.strategy_config(), seed, {options.threads, false});

      const auto path = options.out_dir / ("regions_" + tag + "_" +
                                           std::to_string(seed) + ".csv");
      std::ofstream regions(path, std::ios::binary);
      if (!regions) throw std::runtime_error("cannot write " + path.string());
      regions << format_regions_csv(grid, eval.outcomes);
      report.region_files.push_back(path);

      for (const auto& m : eval.metrics) {
        summary << m.strategy << ',' << sweep_param << ',' << value_label
                << ',' << seed << ',' << fixed6(m.arp) << ',' << fixed6(m.mrp)
                << ',' << fixed6(m.recall) << ',' << m.region_count << ','
                << m.positives << ',' << fixed6(m.total_spent) << '\n';
        ++report.summary_rows;
      }
    }
  }

  ordered_json manifest;
  manifest["version"] = library_version();
  manifest["config"] = ordered_json::parse(config_to_json(cfg));
  manifest["seeds"] = cfg.seeds;
  manifest["dataset"] = {{"path", cfg.dataset_path},
                         {"checksum", file_checksum(cfg.dataset_path)},
                         {"users", dataset.users.size()}};
  std::ofstream mf(options.out_dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  return report;
}

std::vector<AggregateRow> aggregate_runs(const std::filesystem::path& dir) {
  const auto path = dir / "summary.csv";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("no summary.csv in " + dir.string());
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw std::runtime_error("unexpected summary.csv header");
  }

  struct Acc {
    std::vector<double> arp, mrp, recall;
  };
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::tuple<std::string, std::string, std::string>, Acc> acc;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw std::runtime_error("malformed summary row");
    auto key = std::make_tuple(f[0], f[1], f[2]);
    auto [it, fresh] = acc.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.arp.push_back(std::stod(f[4]));
    it->second.mrp.push_back(std::stod(f[5]));
    it->second.recall.push_back(std::stod(f[6]));
  }
  if (order.empty()) throw std::runtime_error("summary.csv has no rows");

  const auto stat = [](const std::vector<double>& v) {
    AggregateStat s{0.0, v.front(), v.front()};
    for (double x : v) {
      s.mean += x;
      s.min = std::min(s.min, x);
      s.max = std::max(s.max, x);
    }
    s.mean /= static_cast<double>(v.size());
    return s;
  };
  std::vector<AggregateRow> rows;
  for (const auto& key : order) {
    const Acc& a = acc.at(key);
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                    a.arp.size(), stat(a.arp), stat(a.mrp), stat(a.recall)});
  }
  return rows;
}

std::string format_report_csv(std::span<const AggregateRow> rows) {
  std::string out =
      "strategy,sweep_param,sweep_value,seeds,arp_mean,arp_min,arp_max,"
      "mrp_mean,mrp_min,mrp_max,recall_mean,recall_min,recall_max\n";
  for (const auto& r : rows) {
    out += r.strategy + ',' + r.sweep_param + ',' + r.sweep_value + ',' +
           std::to_string(r.seeds);
    for (const AggregateStat* s : {&r.arp, &r.mrp, &r.recall}) {
      out += ',' + fixed6(s->mean) + ',' + fixed6(s->min) + ',' +
             fixed6(s->max);
    }
    out += '\n';
  }
  return out;
}

std::string format_report_json(std::span<const AggregateRow> rows) {
  // Values are rounded exactly as in the CSV so both formats agree.
  const auto r6 = [](double v) { return std::stod(fixed6(v)); };
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["strategy"] = r.strategy;
    o["sweep_param"] = r.sweep_param;
    o["sweep_value"] = r.sweep_value;
    o["seeds"] = r.seeds;
    const std::pair<const char*, const AggregateStat*> stats[] = {
        {"arp", &r.arp}, {"mrp", &r.mrp}, {"recall", &r.recall}};
    for (const auto& [name, s] : stats) {
      o[std::string(name) + "_mean"] = r6(s->mean);
      o[std::string(name) + "_min"] = r6(s->min);
      o[std::string(name) + "_max"] = r6(s->max);
    }
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + '\n';
}

}  // namespace spp

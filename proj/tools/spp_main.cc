// Command-line front end: ingest check-ins, run experiments, aggregate
// results, and generate synthetic check-in dumps.
//
// Exit codes: 0 success, 2 usage/config error, 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spp/experiment.h"
#include "spp/ingest.h"
#include "spp/synthetic.h"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

struct IngestArgs {
  std::string input;
  std::vector<double> bbox{spp::kLosAngelesBox.sw.lat,
                           spp::kLosAngelesBox.sw.lon,
                           spp::kLosAngelesBox.ne.lat,
                           spp::kLosAngelesBox.ne.lon};
  std::uint64_t seed = 1;
  std::string output = "data/checkins_la.csv";
};

int cmd_ingest(const IngestArgs& args) {
  std::ifstream in(args.input, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read input " << args.input << "\n";
    return kUsageError;
  }
  const spp::LatLongBox box{{args.bbox[0], args.bbox[1]},
                            {args.bbox[2], args.bbox[3]}};
  if (!box.sw.valid() || !box.ne.valid() || box.sw.lat >= box.ne.lat ||
      box.sw.lon >= box.ne.lon) {
    std::cerr << "error: --bbox must be sw_lat,sw_long,ne_lat,ne_long\n";
    return kUsageError;
  }
  const auto parsed = spp::parse_checkins(in);
  auto dataset = spp::filter_and_sample(parsed.records, box, args.seed);
  dataset.source = args.input;
  dataset.malformed = parsed.malformed;
  if (dataset.users.empty()) {
    std::cerr << "error: zero users inside the bounding box\n";
    return kUsageError;
  }
  spp::write_snapshot(dataset, args.output);
  std::cout << "users: " << dataset.users.size()
            << " (malformed rows skipped: " << parsed.malformed << ")\n"
            << "wrote " << args.output << " and "
            << spp::sidecar_path(args.output).string() << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            unsigned threads) {
  const spp::ExperimentConfig cfg = spp::load_config(config_path);
  const auto report = spp::run_experiment(cfg, {out_dir, threads});
  std::cout << "wrote " << report.region_files.size()
            << " region tables and " << report.summary_rows
            << " summary rows to " << out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& dir, const std::string& format) {
  const auto rows = spp::aggregate_runs(dir);
  std::cout << (format == "json" ? spp::format_report_json(rows)
                                 : spp::format_report_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial privacy pricing simulator"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Sample one check-in per user into a snapshot");
  ingest_cmd->add_option("--input", ingest.input, "Gowalla-format TSV")
      ->required();
  ingest_cmd->add_option("--bbox", ingest.bbox,
                         "sw_lat,sw_long,ne_lat,ne_long (default: Los Angeles)")
      ->expected(4)
      ->delimiter(',');
  ingest_cmd->add_option("--seed", ingest.seed, "Sampling seed");
  ingest_cmd->add_option("--output", ingest.output,
                         "Snapshot CSV path (sidecar written next to it)");

  std::string config_path, out_dir = "results";
  unsigned threads = 1;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config");
  run_cmd->add_option("--config", config_path, "JSON experiment config")
      ->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  std::string report_dir, format = "csv";
  auto* report_cmd =
      app.add_subcommand("report", "Aggregate run outputs across seeds");
  report_cmd->add_option("--in", report_dir, "Directory with summary.csv")
      ->required();
  report_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  spp::SyntheticCityOptions synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Write a synthetic Los Angeles-like check-in TSV");
  synth_cmd->add_option("--output", synth_out, "Output TSV path")->required();
  synth_cmd->add_option("--users", synth.users_in_box, "Users inside the box");
  synth_cmd->add_option("--outside", synth.users_outside,
                        "Users with no in-box check-ins");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*run_cmd) return cmd_run(config_path, out_dir, threads);
    if (*report_cmd) return cmd_report(report_dir, format);
    if (*synth_cmd) {
      std::ofstream out(synth_out, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << synth_out << "\n";
        return kUsageError;
      }
      const auto s = spp::write_synthetic_checkins(out, synth);
      std::cout << "wrote " << s.rows << " check-ins (" << s.malformed_rows
                << " deliberately malformed) to " << synth_out << "\n";
      return 0;
    }
  } catch (const spp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

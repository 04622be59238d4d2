// Copyright 2026 The PIS Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pis_sim: trace conversion, single runs, sweeps and router comparisons.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pis/experiment.hpp"
#include "pis/ingest.hpp"
#include "pis/metrics.hpp"

namespace {

// Raw flag values for one subcommand, applied over the config file.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::string> sweep;
  bool dump_config = false;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_flag("--dump-config", o.dump_config, "print the resolved configuration and exit");
  for (const pis::ConfigKey& key : pis::config_keys()) {
    if (key.name == "sweep") {
      cmd->add_option("--sweep", o.sweep, "sweep axis key=v1,v2,... (repeatable)")->take_all();
      continue;
    }
    std::string help = key.help;
    help += " [default: " + key.get(pis::ExperimentConfig{}) + "]";
    // Plain string options; values are validated by the registry.
    cmd->add_option_function<std::string>(
        "--" + key.name, [&o, name = key.name](const std::string& v) { o.values[name] = v; }, help);
  }
}

pis::ExperimentConfig resolve(const Overrides& o) {
  pis::ExperimentConfig config;
  if (!o.config_file.empty()) config = pis::load_config_file(o.config_file, config);
  for (const pis::ConfigKey& key : pis::config_keys()) {
    if (auto it = o.values.find(key.name); it != o.values.end()) key.set(config, it->second);
  }
  if (!o.sweep.empty()) {
    config.sweep.clear();
    for (const auto& axis : o.sweep) config.sweep.push_back(pis::parse_sweep_axis(axis));
  }
  return config;
}

void print_snapshot_header(std::ostream& out) {
  out << "delivery_ratio,overhead_ratio,avg_latency_s,avg_hop_count,created,delivered,relays\n";
}

void print_snapshot(const pis::MetricsSnapshot& s, std::ostream& out) {
  out << pis::format_number(s.delivery_ratio) << ',' << pis::format_number(s.overhead_ratio) << ','
      << pis::format_number(s.avg_latency_s) << ',' << pis::format_number(s.avg_hop_count) << ','
      << s.created << ',' << s.delivered << ',' << s.relays << '\n';
}

int do_convert(const std::string& input, const std::string& output, const std::string& format,
               const pis::ConvertOptions& options) {
  const pis::NormalizedTrace trace = pis::parse_trace(input, pis::parse_trace_format(format), options);
  if (output.empty() || output == "-") {
    pis::write_trace(trace, std::cout);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output);
    pis::write_trace(trace, out);
    if (!out) throw std::runtime_error("write failed: " + output);
  }
  std::cerr << "converted " << trace.events.size() << " events, " << trace.num_nodes << " nodes, duration "
            << pis::format_number(trace.duration) << " s\n";
  return 0;
}

int do_run(const pis::ExperimentConfig& config) {
  config.validate();
  const pis::LoadedInputs inputs = pis::load_inputs(config);
  for (const auto& w : inputs.profiles.warnings()) std::cerr << "warning: " << w << '\n';
  const pis::MetricsReport report = pis::run_single(config, inputs);
  std::filesystem::create_directories(config.output);
  const auto stem = config.output / (config.router + "_seed" + std::to_string(config.engine.rng_seed));
  pis::export_report(report, stem.string() + ".csv", pis::ReportFormat::kCsv);
  pis::export_report(report, stem.string() + ".json", pis::ReportFormat::kJson);
  print_snapshot_header(std::cout);
  print_snapshot(report.final_snapshot, std::cout);
  std::cerr << "wrote " << stem.string() << ".csv and .json\n";
  return 0;
}

int do_sweep(const pis::ExperimentConfig& config) {
  const pis::ExperimentResult result = pis::run_experiment(config);
  pis::write_aggregate_csv(result.aggregate, config, std::cout);
  std::cerr << "wrote " << result.files.size() << " files under " << config.output.string() << '\n';
  return 0;
}

int do_compare(const pis::ExperimentConfig& config) {
  const pis::ComparisonResult result = pis::compare_routers(config, config.compare_routers);
  std::cout << "router,";
  print_snapshot_header(std::cout);
  for (const auto& row : result.rows) {
    std::cout << row.router << ',';
    print_snapshot(row.mean, std::cout);
  }
  std::cerr << "wrote " << result.files.size() << " files under " << config.output.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-aware DTN routing simulator"};
  app.require_subcommand(1);

  std::string conv_input, conv_output, conv_format = "sigcomm09";
  pis::ConvertOptions conv_options;
  CLI::App* convert = app.add_subcommand("convert", "convert a raw contact trace to the normalized format");
  convert->add_option("-i,--input,--in", conv_input, "raw trace file")->required()->check(CLI::ExistingFile);
  convert->add_option("-o,--output,--out", conv_output, "normalized trace file (default stdout)");
  convert->add_option("-f,--format,--from", conv_format, "input format: sigcomm09, infocom06, normalized")
      ->capture_default_str();
  convert->add_option("--gap-threshold", conv_options.gap_threshold_s, "merge sightings closer than this (s)")
      ->capture_default_str();
  convert->add_option("--sampling-period", conv_options.sampling_period_s, "scan period (s)")
      ->capture_default_str();
  convert->add_option("--id-offset", conv_options.id_offset, "subtracted from raw node ids")
      ->capture_default_str();

  Overrides run_o, sweep_o, compare_o;
  CLI::App* run = app.add_subcommand("run", "simulate one router once");
  add_config_flags(run, run_o);
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid with repetitions");
  add_config_flags(sweep, sweep_o);
  CLI::App* compare = app.add_subcommand("compare", "run several routers on identical traffic");
  add_config_flags(compare, compare_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) return do_convert(conv_input, conv_output, conv_format, conv_options);

    const Overrides& o = run->parsed() ? run_o : sweep->parsed() ? sweep_o : compare_o;
    const pis::ExperimentConfig config = resolve(o);
    if (o.dump_config) {
      std::cout << pis::serialize_config(config);
      return 0;
    }
    if (run->parsed()) return do_run(config);
    if (sweep->parsed()) return do_sweep(config);
    return do_compare(config);
  } catch (const std::exception& e) {
    std::cerr << "pis_sim: error: " << e.what() << '\n';
    return 1;
  }
}

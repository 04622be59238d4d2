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

#ifndef PIS_EXPERIMENT_HPP_
#define PIS_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pis/engine.hpp"
#include "pis/ingest.hpp"
#include "pis/metrics.hpp"
#include "pis/router.hpp"
#include "pis/router_baselines.hpp"
#include "pis/router_pis.hpp"

namespace pis {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

// "gamma=0.2,0.4,0.6" -> {gamma, [0.2, 0.4, 0.6]}. The key must be sweepable.
SweepAxis parse_sweep_axis(std::string_view text);

struct ExperimentConfig {
  std::filesystem::path trace;
  TraceFormat trace_format = TraceFormat::kNormalized;
  ConvertOptions convert;
  std::filesystem::path profiles;  // optional
  std::string router = "pis";
  std::vector<std::string> compare_routers = {"pis", "epidemic", "prophet", "simbet"};

  EngineConfig engine;
  PisConfig pis;
  ProphetConfig prophet;
  SimBetConfig simbet;
  SprayAndWaitConfig snw;

  std::vector<SweepAxis> sweep;
  int repetitions = 1;
  std::filesystem::path output = "results";
  int jobs = 1;

  // Checks parameter ranges, router names, sweep keys, and that the input
  // files exist.
  void validate() const;
};

// One settable configuration field. Every field is reachable from the config
// file (`key = value`) and from the command line (`--key value`).
struct ConfigKey {
  std::string name;
  std::string help;
  bool sweepable = false;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();
const ConfigKey* find_config_key(std::string_view name);

// Throws std::invalid_argument naming the key on unknown keys or bad values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const ExperimentConfig& config, std::string_view key);

// Flat `key = value` lines; '#' starts a comment. Applied on top of `base`.
// Relative paths resolve against the file's directory.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {},
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& config);

// Every key with its resolved value, in registry order.
std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& config);

std::unique_ptr<Router> make_router(const ExperimentConfig& config, std::string_view name);
const std::vector<std::string>& known_routers();

// splitmix64 over (master, grid point, repetition). Independent of the router,
// so every router in a comparison sees the same workload.
std::uint64_t derive_seed(std::uint64_t master, std::size_t grid_point, std::size_t repetition);

using GridPoint = std::vector<std::pair<std::string, std::string>>;

// Cartesian product of the axes, first axis varying slowest. No axes gives a
// single empty point.
std::vector<GridPoint> expand_grid(const std::vector<SweepAxis>& axes);

struct LoadedInputs {
  NormalizedTrace trace;
  ProfileStore profiles;
};
LoadedInputs load_inputs(const ExperimentConfig& config);

// One run of config.router with config.engine.rng_seed, no derivation.
MetricsReport run_single(const ExperimentConfig& config, const LoadedInputs& inputs);

struct AggregateRow {
  std::size_t point = 0;
  GridPoint assignments;
  int runs = 0;
  MetricsSnapshot mean;  // field-wise mean of the final snapshots
};

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  std::vector<AggregateRow> aggregate;
};

// repetitions x grid runs of config.router. Writes
//   <output>/runs/p<point>_r<rep>.csv and .json
//   <output>/aggregate.csv
// A failing run aborts the grid; the error names the point and repetition.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
  std::string router;
  int runs = 0;
  MetricsSnapshot mean;
};

struct ComparisonResult {
  std::vector<std::filesystem::path> files;
  std::vector<ComparisonRow> rows;
  std::vector<MetricsReport> reports;  // router-major, then repetition
};

// Same seeds for every router. Writes per-run reports, comparison.csv with one
// row per router, and compare_<metric>.csv with one column per router.
ComparisonResult compare_routers(const ExperimentConfig& config,
                                 const std::vector<std::string>& routers);

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const ExperimentConfig& config,
                         std::ostream& out);

}  // namespace pis

#endif  // PIS_EXPERIMENT_HPP_

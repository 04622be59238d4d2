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

#include "pis/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace pis {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw std::invalid_argument("invalid value '" + std::string(value) + "' for " + std::string(key) +
                              ": expected " + std::string(expected));
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, "a number");
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, "an integer");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  bad_value(key, text, "true or false");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

template <typename Int>
std::string int_str(Int v) {
  return std::to_string(v);
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Builders for the registry below.
template <typename Access>
ConfigKey number_key(std::string name, std::string help, Access access, bool sweepable = true) {
  ConfigKey k;
  k.name = name;
  k.help = std::move(help);
  k.sweepable = sweepable;
  k.set = [access, name](ExperimentConfig& c, std::string_view v) { access(c) = parse_double(name, v); };
  k.get = [access](const ExperimentConfig& c) {
    return format_number(access(c));
  };
  return k;
}

template <typename Int, typename Access>
ConfigKey integer_key(std::string name, std::string help, Access access, bool sweepable = true) {
  ConfigKey k;
  k.name = name;
  k.help = std::move(help);
  k.sweepable = sweepable;
  k.set = [access, name](ExperimentConfig& c, std::string_view v) { access(c) = parse_int<Int>(name, v); };
  k.get = [access](const ExperimentConfig& c) { return int_str(access(c)); };
  return k;
}

template <typename Access>
ConfigKey bool_key(std::string name, std::string help, Access access, bool sweepable = true) {
  ConfigKey k;
  k.name = name;
  k.help = std::move(help);
  k.sweepable = sweepable;
  k.set = [access, name](ExperimentConfig& c, std::string_view v) { access(c) = parse_bool(name, v); };
  k.get = [access](const ExperimentConfig& c) { return bool_str(access(c)); };
  return k;
}

ConfigKey custom_key(std::string name, std::string help, bool sweepable,
                     std::function<void(ExperimentConfig&, std::string_view)> set,
                     std::function<std::string(const ExperimentConfig&)> get) {
  return ConfigKey{std::move(name), std::move(help), sweepable, std::move(set), std::move(get)};
}

std::vector<ConfigKey> build_registry() {
  std::vector<ConfigKey> keys;
  auto path_key = [&](std::string name, std::string help, std::filesystem::path ExperimentConfig::*member) {
    keys.push_back(custom_key(
        name, std::move(help), false,
        [member](ExperimentConfig& c, std::string_view v) { c.*member = std::filesystem::path(trim(v)); },
        [member](const ExperimentConfig& c) { return (c.*member).string(); }));
  };

  // Inputs and outputs.
  path_key("trace", "contact trace file", &ExperimentConfig::trace);
  keys.push_back(custom_key(
      "trace-format", "trace format: normalized, sigcomm09, infocom06", false,
      [](ExperimentConfig& c, std::string_view v) { c.trace_format = parse_trace_format(trim(v)); },
      [](const ExperimentConfig& c) { return std::string(trace_format_name(c.trace_format)); }));
  keys.push_back(number_key("gap-threshold", "raw traces: merge sightings closer than this (s)",
                            [](auto& c) -> auto& { return c.convert.gap_threshold_s; }, false));
  keys.push_back(number_key("sampling-period", "raw traces: scan period added to a contact's end (s)",
                            [](auto& c) -> auto& { return c.convert.sampling_period_s; }, false));
  keys.push_back(integer_key<std::uint32_t>(
      "id-offset", "raw traces: subtracted from every node id",
      [](auto& c) -> auto& { return c.convert.id_offset; }, false));
  path_key("profiles", "node profile file (interests and friends)", &ExperimentConfig::profiles);
  keys.push_back(custom_key(
      "router", "router: pis, epidemic, prophet, simbet, snw", false,
      [](ExperimentConfig& c, std::string_view v) { c.router = std::string(trim(v)); },
      [](const ExperimentConfig& c) { return c.router; }));
  keys.push_back(custom_key(
      "routers", "comma-separated routers for compare", false,
      [](ExperimentConfig& c, std::string_view v) {
        c.compare_routers.clear();
        for (auto part : split(v, ',')) {
          if (!part.empty()) c.compare_routers.emplace_back(part);
        }
      },
      [](const ExperimentConfig& c) { return join(c.compare_routers, ","); }));
  path_key("output", "output directory", &ExperimentConfig::output);
  keys.push_back(integer_key<int>("repetitions", "runs per grid point",
                                  [](auto& c) -> auto& { return c.repetitions; }, false));
  keys.push_back(integer_key<int>("jobs", "parallel worker threads",
                                  [](auto& c) -> auto& { return c.jobs; }, false));
  keys.push_back(custom_key(
      "sweep", "sweep axis key=v1,v2,... (repeatable)", false,
      [](ExperimentConfig& c, std::string_view v) {
        if (trim(v).empty()) {
          c.sweep.clear();
          return;
        }
        for (auto axis : split(v, ';')) {
          if (!axis.empty()) c.sweep.push_back(parse_sweep_axis(axis));
        }
      },
      [](const ExperimentConfig& c) {
        std::vector<std::string> axes;
        for (const auto& a : c.sweep) axes.push_back(a.key + "=" + join(a.values, ","));
        return join(axes, ";");
      }));

  // Engine.
  keys.push_back(integer_key<std::uint64_t>("seed", "workload random seed",
                                            [](auto& c) -> auto& { return c.engine.rng_seed; },
                                            false));
  keys.push_back(number_key("duration", "simulated time (s)",
                            [](auto& c) -> auto& { return c.engine.duration_s; }));
  keys.push_back(number_key("warmup", "no messages are created before this time (s)",
                            [](auto& c) -> auto& { return c.engine.warmup_s; }));
  keys.push_back(number_key("transmit-speed", "link speed (bytes/s)",
                            [](auto& c) -> auto& { return c.engine.transmit_speed; }));
  keys.push_back(number_key("interval-min", "minimum message inter-arrival (s)",
                            [](auto& c) -> auto& { return c.engine.message_interval_min_s; }));
  keys.push_back(number_key("interval-max", "maximum message inter-arrival (s)",
                            [](auto& c) -> auto& { return c.engine.message_interval_max_s; }));
  keys.push_back(custom_key(
      "interval", "message inter-arrival range lo:hi (s)", true,
      [](ExperimentConfig& c, std::string_view v) {
        const auto parts = split(v, ':');
        if (parts.size() != 2) bad_value("interval", v, "lo:hi");
        c.engine.message_interval_min_s = parse_double("interval", parts[0]);
        c.engine.message_interval_max_s = parse_double("interval", parts[1]);
      },
      [](const ExperimentConfig& c) {
        return format_number(c.engine.message_interval_min_s) + ":" +
               format_number(c.engine.message_interval_max_s);
      }));
  keys.push_back(integer_key<std::int64_t>("size-min", "minimum message size (bytes)",
                                           [](auto& c) -> auto& { return c.engine.message_size_min; }));
  keys.push_back(integer_key<std::int64_t>("size-max", "maximum message size (bytes)",
                                           [](auto& c) -> auto& { return c.engine.message_size_max; }));
  keys.push_back(number_key("ttl", "message time to live (s)",
                            [](auto& c) -> auto& { return c.engine.ttl_s; }));
  keys.push_back(integer_key<std::int64_t>("buffer", "buffer capacity per node (bytes)",
                                           [](auto& c) -> auto& { return c.engine.buffer_capacity; }));
  keys.push_back(number_key("snapshot-interval", "metrics sampling period (s)",
                            [](auto& c) -> auto& { return c.engine.snapshot_interval_s; }, false));
  keys.push_back(bool_key("audit-copies", "check copy conservation after every event",
                          [](auto& c) -> auto& { return c.engine.audit_copies; }, false));

  // Similarity and PIS.
  keys.push_back(number_key("alpha", "weight of the direct term in sim_ins and sim_soc",
                            [](auto& c) -> auto& { return c.pis.params.alpha; }));
  keys.push_back(number_key("beta", "per-slot decay of the lookback window",
                            [](auto& c) -> auto& { return c.pis.params.beta; }));
  keys.push_back(integer_key<int>("lookback", "slots in the lookback window (i)",
                                  [](auto& c) -> auto& { return c.pis.params.lookback; }));
  keys.push_back(number_key("rho", "weight of the proximity deviation",
                            [](auto& c) -> auto& { return c.pis.params.rho; }));
  keys.push_back(number_key("sigma", "weight of the interest deviation",
                            [](auto& c) -> auto& { return c.pis.params.sigma; }));
  keys.push_back(number_key("tau", "weight of the social deviation",
                            [](auto& c) -> auto& { return c.pis.params.tau; }));
  keys.push_back(bool_key("squared-weighting", "window weights beta^(2^k) instead of beta^(k+1)",
                          [](auto& c) -> auto& { return c.pis.params.squared_weighting; }));
  keys.push_back(bool_key("credit-direct-tie", "count the carrier's own tie in sim_pro",
                          [](auto& c) -> auto& { return c.pis.params.credit_direct_tie; }));
  keys.push_back(number_key("gamma", "copy range control: split while simPIS + gamma > 0",
                            [](auto& c) -> auto& { return c.pis.gamma; }));
  keys.push_back(integer_key<int>("nof-copy", "initial copy budget per message (pis)",
                                  [](auto& c) -> auto& { return c.pis.initial_nof_copy; }));
  keys.push_back(bool_key("fresh-peer-sim", "recompute the holder's similarity at decision time",
                          [](auto& c) -> auto& { return c.pis.fresh_peer_sim; }));
  keys.push_back(integer_key<std::int64_t>("degree-initial", "ego entry for a first contact",
                                           [](auto& c) -> auto& { return c.pis.degrees.initial_value; }));
  keys.push_back(integer_key<std::int64_t>("degree-increment", "ego entry increment per contact",
                                           [](auto& c) -> auto& { return c.pis.degrees.incremental_value; }));
  keys.push_back(custom_key(
      "slot-duration", "length of one slot (s)", true,
      [](ExperimentConfig& c, std::string_view v) {
        c.pis.clock = SlotClock(parse_double("slot-duration", v), c.pis.clock.slots_per_cycle());
      },
      [](const ExperimentConfig& c) { return format_number(c.pis.clock.slot_duration()); }));
  keys.push_back(custom_key(
      "slots-per-cycle", "slots per day", true,
      [](ExperimentConfig& c, std::string_view v) {
        c.pis.clock = SlotClock(c.pis.clock.slot_duration(), parse_int<int>("slots-per-cycle", v));
      },
      [](const ExperimentConfig& c) { return std::to_string(c.pis.clock.slots_per_cycle()); }));

  // Baselines.
  keys.push_back(number_key("prophet-p-init", "PROPHET encounter increment",
                            [](auto& c) -> auto& { return c.prophet.p_init; }));
  keys.push_back(number_key("prophet-beta", "PROPHET transitivity scaling",
                            [](auto& c) -> auto& { return c.prophet.beta; }));
  keys.push_back(number_key("prophet-gamma", "PROPHET aging base",
                            [](auto& c) -> auto& { return c.prophet.gamma; }));
  keys.push_back(number_key("prophet-time-unit", "PROPHET aging time unit (s)",
                            [](auto& c) -> auto& { return c.prophet.seconds_per_time_unit; }));
  keys.push_back(number_key("simbet-alpha", "SimBet similarity weight",
                            [](auto& c) -> auto& { return c.simbet.alpha; }));
  keys.push_back(integer_key<int>("snw-copies", "spray-and-wait copy budget",
                                  [](auto& c) -> auto& { return c.snw.copies; }));
  return keys;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. After the first failure
// no new indices start; the failure with the lowest index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::optional<std::size_t> failed_index;
  std::exception_ptr failure;
  auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failed_index || i < *failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string describe(const GridPoint& point) {
  if (point.empty()) return "(defaults)";
  std::string out;
  for (const auto& [k, v] : point) {
    if (!out.empty()) out += ' ';
    out += k + "=" + v;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void create_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

MetricsSnapshot mean_of(const std::vector<MetricsSnapshot>& snaps) {
  MetricsSnapshot m;
  if (snaps.empty()) return m;
  double created = 0, delivered = 0, relays = 0;
  for (const auto& s : snaps) {
    m.t_s = s.t_s;
    m.delivery_ratio += s.delivery_ratio;
    m.overhead_ratio += s.overhead_ratio;
    m.avg_latency_s += s.avg_latency_s;
    m.avg_hop_count += s.avg_hop_count;
    created += static_cast<double>(s.created);
    delivered += static_cast<double>(s.delivered);
    relays += static_cast<double>(s.relays);
  }
  const double n = static_cast<double>(snaps.size());
  m.delivery_ratio /= n;
  m.overhead_ratio /= n;
  m.avg_latency_s /= n;
  m.avg_hop_count /= n;
  m.created = std::llround(created / n);
  m.delivered = std::llround(delivered / n);
  m.relays = std::llround(relays / n);
  return m;
}

// Counts in aggregate files keep their fractional means.
struct MeanCounts {
  double created = 0, delivered = 0, relays = 0;
};

MeanCounts mean_counts(const std::vector<MetricsSnapshot>& snaps) {
  MeanCounts c;
  if (snaps.empty()) return c;
  for (const auto& s : snaps) {
    c.created += static_cast<double>(s.created);
    c.delivered += static_cast<double>(s.delivered);
    c.relays += static_cast<double>(s.relays);
  }
  const double n = static_cast<double>(snaps.size());
  c.created /= n;
  c.delivered /= n;
  c.relays /= n;
  return c;
}

void write_echo(const ExperimentConfig& config, std::ostream& out) {
  for (const auto& [k, v] : echo_config(config)) out << "# config." << k << "=" << v << "\n";
}

void write_run_files(const MetricsReport& report, const std::filesystem::path& stem,
                     std::vector<std::filesystem::path>& files) {
  auto csv = stem;
  csv += ".csv";
  auto json = stem;
  json += ".json";
  export_report(report, csv, ReportFormat::kCsv);
  export_report(report, json, ReportFormat::kJson);
  files.push_back(csv);
  files.push_back(json);
}

}  // namespace

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("sweep axis '" + std::string(text) + "' must look like key=v1,v2");
  }
  SweepAxis axis;
  axis.key = std::string(trim(text.substr(0, eq)));
  const ConfigKey* key = find_config_key(axis.key);
  if (key == nullptr) throw std::invalid_argument("unknown sweep parameter '" + axis.key + "'");
  if (!key->sweepable) throw std::invalid_argument("parameter '" + axis.key + "' cannot be swept");
  for (auto v : split(text.substr(eq + 1), ',')) {
    if (v.empty()) throw std::invalid_argument("empty value in sweep axis '" + std::string(text) + "'");
    // Reject values the key would not accept.
    ExperimentConfig probe;
    key->set(probe, v);
    axis.values.emplace_back(v);
  }
  return axis;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_registry();
  return keys;
}

const ConfigKey* find_config_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const ConfigKey* k = find_config_key(trim(key));
  if (k == nullptr) throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  k->set(config, value);
}

std::string get_config_value(const ExperimentConfig& config, std::string_view key) {
  const ConfigKey* k = find_config_key(key);
  if (k == nullptr) throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  return k->get(config);
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base,
                              const std::filesystem::path& base_dir) {
  std::string line;
  std::size_t lineno = 0;
  bool sweep_reset = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key = value");
    const std::string_view key = trim(body.substr(0, eq));
    const std::string_view value = trim(body.substr(eq + 1));
    try {
      if (key == "sweep" && !sweep_reset) {
        base.sweep.clear();
        sweep_reset = true;
      }
      set_config_value(base, key, value);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    if (!base_dir.empty() && (key == "trace" || key == "profiles" || key == "output")) {
      auto& p = key == "trace" ? base.trace : key == "profiles" ? base.profiles : base.output;
      if (!p.empty() && p.is_relative()) p = base_dir / p;
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  try {
    return parse_config(in, std::move(base), path.parent_path());
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [k, v] : echo_config(config)) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) out.emplace_back(k.name, k.get(config));
  return out;
}

const std::vector<std::string>& known_routers() {
  static const std::vector<std::string> names = {"pis", "epidemic", "prophet", "simbet", "snw"};
  return names;
}

std::unique_ptr<Router> make_router(const ExperimentConfig& config, std::string_view name) {
  if (name == "pis") return std::make_unique<PisRouter>(config.pis);
  if (name == "epidemic") return std::make_unique<EpidemicRouter>();
  if (name == "prophet") return std::make_unique<ProphetRouter>(config.prophet);
  if (name == "simbet") return std::make_unique<SimBetRouter>(config.simbet);
  if (name == "snw") return std::make_unique<SprayAndWaitRouter>(config.snw);
  throw std::invalid_argument("unknown router '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (trace.empty()) throw std::invalid_argument("no trace file given");
  if (!std::filesystem::is_regular_file(trace)) {
    throw std::invalid_argument("trace file not found: " + trace.string());
  }
  if (!profiles.empty() && !std::filesystem::is_regular_file(profiles)) {
    throw std::invalid_argument("profile file not found: " + profiles.string());
  }
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (output.empty()) throw std::invalid_argument("output directory must not be empty");
  engine.validate();
  make_router(*this, router);
  for (const auto& r : compare_routers) make_router(*this, r);
  for (const auto& axis : sweep) {
    const ConfigKey* k = find_config_key(axis.key);
    if (k == nullptr || !k->sweepable) throw std::invalid_argument("cannot sweep '" + axis.key + "'");
    if (axis.values.empty()) throw std::invalid_argument("sweep axis '" + axis.key + "' has no values");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::size_t grid_point, std::size_t repetition) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  h = mix(h ^ static_cast<std::uint64_t>(grid_point));
  h = mix(h ^ static_cast<std::uint64_t>(repetition));
  return h;
}

std::vector<GridPoint> expand_grid(const std::vector<SweepAxis>& axes) {
  std::vector<GridPoint> grid{GridPoint{}};
  for (const auto& axis : axes) {
    std::vector<GridPoint> next;
    next.reserve(grid.size() * axis.values.size());
    for (const auto& point : grid) {
      for (const auto& v : axis.values) {
        GridPoint p = point;
        p.emplace_back(axis.key, v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

LoadedInputs load_inputs(const ExperimentConfig& config) {
  LoadedInputs in;
  in.trace = parse_trace(config.trace, config.trace_format, config.convert);
  if (!config.profiles.empty()) {
    in.profiles = parse_profiles(config.profiles, in.trace.num_nodes);
  }
  in.profiles.ensure_size(in.trace.num_nodes);
  return in;
}

MetricsReport run_single(const ExperimentConfig& config, const LoadedInputs& inputs) {
  auto router = make_router(config, config.router);
  MetricsReport report = run(inputs.trace, inputs.profiles, *router, config.engine);
  report.router = router->name();
  report.seed = config.engine.rng_seed;
  report.config = echo_config(config);
  return report;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const ExperimentConfig& config,
                         std::ostream& out) {
  out << "point";
  for (const auto& axis : config.sweep) out << ',' << axis.key;
  out << ",runs,delivery_ratio,overhead_ratio,avg_latency_s,avg_hop_count,created,delivered,relays\n";
  for (const auto& row : rows) {
    out << row.point;
    for (const auto& [k, v] : row.assignments) out << ',' << v;
    out << ',' << row.runs << ',' << format_number(row.mean.delivery_ratio) << ','
        << format_number(row.mean.overhead_ratio) << ',' << format_number(row.mean.avg_latency_s) << ','
        << format_number(row.mean.avg_hop_count) << ',' << row.mean.created << ',' << row.mean.delivered
        << ',' << row.mean.relays << '\n';
  }
  out << "# master_seed=" << config.engine.rng_seed << "\n";
  write_echo(config, out);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const LoadedInputs inputs = load_inputs(config);
  const std::vector<GridPoint> grid = expand_grid(config.sweep);
  const std::size_t reps = static_cast<std::size_t>(config.repetitions);

  // Resolve every point up front so bad combinations fail before any run.
  std::vector<ExperimentConfig> resolved;
  resolved.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    ExperimentConfig c = config;
    try {
      for (const auto& [k, v] : grid[p]) set_config_value(c, k, v);
      c.engine.validate();
      make_router(c, c.router);
    } catch (const std::exception& e) {
      throw std::runtime_error("grid point " + std::to_string(p) + " " + describe(grid[p]) + ": " + e.what());
    }
    resolved.push_back(std::move(c));
  }

  const auto runs_dir = config.output / "runs";
  create_dirs(runs_dir);

  std::vector<MetricsReport> reports(grid.size() * reps);
  parallel_for(reports.size(), config.jobs, [&](std::size_t task) {
    const std::size_t p = task / reps;
    const std::size_t r = task % reps;
    try {
      ExperimentConfig c = resolved[p];
      c.engine.rng_seed = derive_seed(config.engine.rng_seed, p, r);
      MetricsReport report = run_single(c, inputs);
      report.config.emplace_back("master_seed", std::to_string(config.engine.rng_seed));
      report.config.emplace_back("grid_point", std::to_string(p));
      report.config.emplace_back("repetition", std::to_string(r));
      reports[task] = std::move(report);
    } catch (const std::exception& e) {
      throw std::runtime_error("grid point " + std::to_string(p) + " " + describe(grid[p]) +
                               ", repetition " + std::to_string(r) + ": " + e.what());
    }
  });

  ExperimentResult result;
  for (std::size_t task = 0; task < reports.size(); ++task) {
    const std::size_t p = task / reps;
    const std::size_t r = task % reps;
    write_run_files(reports[task], runs_dir / ("p" + std::to_string(p) + "_r" + std::to_string(r)),
                    result.files);
  }
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::vector<MetricsSnapshot> finals;
    for (std::size_t r = 0; r < reps; ++r) finals.push_back(reports[p * reps + r].final_snapshot);
    AggregateRow row;
    row.point = p;
    row.assignments = grid[p];
    row.runs = static_cast<int>(reps);
    row.mean = mean_of(finals);
    result.aggregate.push_back(std::move(row));
  }
  std::ostringstream agg;
  write_aggregate_csv(result.aggregate, config, agg);
  write_file(config.output / "aggregate.csv", agg.str());
  result.files.push_back(config.output / "aggregate.csv");
  return result;
}

ComparisonResult compare_routers(const ExperimentConfig& config, const std::vector<std::string>& routers) {
  config.validate();
  if (routers.empty()) throw std::invalid_argument("no routers to compare");
  for (const auto& r : routers) make_router(config, r);
  const LoadedInputs inputs = load_inputs(config);
  const std::size_t reps = static_cast<std::size_t>(config.repetitions);

  const auto runs_dir = config.output / "runs";
  create_dirs(runs_dir);

  ComparisonResult result;
  result.reports.resize(routers.size() * reps);
  parallel_for(result.reports.size(), config.jobs, [&](std::size_t task) {
    const std::size_t k = task / reps;
    const std::size_t r = task % reps;
    try {
      ExperimentConfig c = config;
      c.router = routers[k];
      c.engine.rng_seed = derive_seed(config.engine.rng_seed, 0, r);
      MetricsReport report = run_single(c, inputs);
      report.config.emplace_back("master_seed", std::to_string(config.engine.rng_seed));
      report.config.emplace_back("repetition", std::to_string(r));
      result.reports[task] = std::move(report);
    } catch (const std::exception& e) {
      throw std::runtime_error("router " + routers[k] + ", repetition " + std::to_string(r) + ": " + e.what());
    }
  });

  for (std::size_t task = 0; task < result.reports.size(); ++task) {
    const std::size_t k = task / reps;
    const std::size_t r = task % reps;
    write_run_files(result.reports[task], runs_dir / (routers[k] + "_r" + std::to_string(r)), result.files);
  }

  std::ostringstream table;
  table << "router,runs,delivery_ratio,overhead_ratio,avg_latency_s,avg_hop_count,created,delivered,relays\n";
  for (std::size_t k = 0; k < routers.size(); ++k) {
    std::vector<MetricsSnapshot> finals;
    for (std::size_t r = 0; r < reps; ++r) finals.push_back(result.reports[k * reps + r].final_snapshot);
    ComparisonRow row{routers[k], static_cast<int>(reps), mean_of(finals)};
    const MeanCounts counts = mean_counts(finals);
    table << row.router << ',' << row.runs << ',' << format_number(row.mean.delivery_ratio) << ','
          << format_number(row.mean.overhead_ratio) << ',' << format_number(row.mean.avg_latency_s) << ','
          << format_number(row.mean.avg_hop_count) << ',' << format_number(counts.created) << ','
          << format_number(counts.delivered) << ',' << format_number(counts.relays) << '\n';
    result.rows.push_back(std::move(row));
  }
  table << "# master_seed=" << config.engine.rng_seed << "\n";
  write_echo(config, table);
  write_file(config.output / "comparison.csv", table.str());
  result.files.push_back(config.output / "comparison.csv");

  // Time series per metric, one column per router, mean over repetitions.
  std::size_t points = SIZE_MAX;
  for (const auto& rep : result.reports) points = std::min(points, rep.series.size());
  struct Metric {
    const char* name;
    double MetricsSnapshot::*field;
  };
  const Metric metrics[] = {{"delivery_ratio", &MetricsSnapshot::delivery_ratio},
                            {"overhead_ratio", &MetricsSnapshot::overhead_ratio},
                            {"avg_latency_s", &MetricsSnapshot::avg_latency_s},
                            {"avg_hop_count", &MetricsSnapshot::avg_hop_count}};
  for (const Metric& m : metrics) {
    std::ostringstream out;
    out << "t_hours";
    for (const auto& r : routers) out << ',' << r;
    out << '\n';
    for (std::size_t i = 0; i < points; ++i) {
      out << format_number(result.reports.front().series[i].t_s / 3600.0);
      for (std::size_t k = 0; k < routers.size(); ++k) {
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) sum += result.reports[k * reps + r].series[i].*(m.field);
        out << ',' << format_number(sum / static_cast<double>(reps));
      }
      out << '\n';
    }
    out << "# master_seed=" << config.engine.rng_seed << "\n";
    write_echo(config, out);
    const auto path = config.output / (std::string("compare_") + m.name + ".csv");
    write_file(path, out.str());
    result.files.push_back(path);
  }
  return result;
}

}  // namespace pis

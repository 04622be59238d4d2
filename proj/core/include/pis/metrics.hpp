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

#ifndef PIS_METRICS_HPP_
#define PIS_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pis/model.hpp"

namespace pis {

struct DeliveryRecord {
  MessageId id{};
  SimTime created_at{};
  std::optional<SimTime> delivered_at;
  int hop_count = 0;                  // at first delivery
  std::vector<SimTime> relay_times;   // completed transfers of any replica

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

struct MetricsSnapshot {
  double t_s = 0.0;
  double delivery_ratio = 0.0;
  double overhead_ratio = 0.0;
  double avg_latency_s = 0.0;
  double avg_hop_count = 0.0;
  std::int64_t created = 0;
  std::int64_t delivered = 0;
  std::int64_t relays = 0;

  friend bool operator==(const MetricsSnapshot&, const MetricsSnapshot&) = default;
};

// Batch evaluation over records, counting only what happened at or before t.
double delivery_ratio(std::span<const DeliveryRecord> records, SimTime t);
double overhead_ratio(std::span<const DeliveryRecord> records, SimTime t);
MetricsSnapshot compute_snapshot(std::span<const DeliveryRecord> records, SimTime t);

// Incremental collector fed by the engine. Messages created before the warmup
// boundary are ignored entirely.
class MetricsCollector {
 public:
  explicit MetricsCollector(SimTime warmup = SimTime{0}) : warmup_(warmup) {}

  void on_created(MessageId id, SimTime t);
  // One completed transfer of any replica, including the delivering one.
  void on_relay(MessageId id, SimTime t);
  // Returns true on the first delivery of `id`.
  bool on_delivered(MessageId id, SimTime t, int hop_count);

  MetricsSnapshot snapshot(SimTime t) const;
  const std::vector<DeliveryRecord>& records() const { return records_; }

 private:
  DeliveryRecord* find(MessageId id);

  SimTime warmup_;
  std::vector<DeliveryRecord> records_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::int64_t created_ = 0;
  std::int64_t delivered_ = 0;
  std::int64_t relays_ = 0;
  std::int64_t latency_sum_us_ = 0;
  std::int64_t hop_sum_ = 0;
};

struct EngineStats {
  std::int64_t contacts = 0;
  std::int64_t transfers_started = 0;
  std::int64_t transfers_completed = 0;
  std::int64_t transfers_aborted = 0;
  std::int64_t buffer_drops = 0;
  std::int64_t refused = 0;
  std::int64_t expired = 0;
  std::int64_t copy_audits = 0;
  std::int64_t copy_violations = 0;

  friend bool operator==(const EngineStats&, const EngineStats&) = default;
};

struct MetricsReport {
  std::string router;
  std::uint64_t seed = 0;
  // Resolved configuration, echoed into every exported file.
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<MetricsSnapshot> series;
  MetricsSnapshot final_snapshot;
  std::vector<DeliveryRecord> records;
  EngineStats stats;

  // relays / delivered, the unadjusted quotient.
  double raw_relay_quotient() const;
};

enum class ReportFormat { kCsv, kJson };

inline constexpr std::string_view kCsvHeader =
    "t_hours,delivery_ratio,overhead_ratio,avg_latency_s,avg_hop_count,created,delivered,relays";

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

void write_csv(const MetricsReport& report, std::ostream& out);
void write_json(const MetricsReport& report, std::ostream& out);
std::string to_csv(const MetricsReport& report);
std::string to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

// Throws std::runtime_error when `path` cannot be written.
void export_report(const MetricsReport& report, const std::filesystem::path& path,
                   ReportFormat format);

}  // namespace pis

#endif  // PIS_METRICS_HPP_

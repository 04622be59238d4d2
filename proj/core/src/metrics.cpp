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

#include "pis/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pis {

namespace {

using nlohmann::json;

// Single formula shared by the incremental and the batch path, so both agree
// bit for bit on identical counts.
MetricsSnapshot make_snapshot(SimTime t, std::int64_t created, std::int64_t delivered,
                              std::int64_t relays, std::int64_t latency_sum_us,
                              std::int64_t hop_sum) {
  MetricsSnapshot s;
  s.t_s = to_seconds(t);
  s.created = created;
  s.delivered = delivered;
  s.relays = relays;
  if (created > 0) s.delivery_ratio = static_cast<double>(delivered) / static_cast<double>(created);
  if (delivered > 0) {
    const auto d = static_cast<double>(delivered);
    s.overhead_ratio = static_cast<double>(relays - delivered) / d;
    s.avg_latency_s = static_cast<double>(latency_sum_us) / 1e6 / d;
    s.avg_hop_count = static_cast<double>(hop_sum) / d;
  }
  return s;
}

json snapshot_to_json(const MetricsSnapshot& s) {
  return json{{"t_s", s.t_s},
              {"delivery_ratio", s.delivery_ratio},
              {"overhead_ratio", s.overhead_ratio},
              {"avg_latency_s", s.avg_latency_s},
              {"avg_hop_count", s.avg_hop_count},
              {"created", s.created},
              {"delivered", s.delivered},
              {"relays", s.relays}};
}

MetricsSnapshot snapshot_from_json(const json& j) {
  MetricsSnapshot s;
  s.t_s = j.at("t_s").get<double>();
  s.delivery_ratio = j.at("delivery_ratio").get<double>();
  s.overhead_ratio = j.at("overhead_ratio").get<double>();
  s.avg_latency_s = j.at("avg_latency_s").get<double>();
  s.avg_hop_count = j.at("avg_hop_count").get<double>();
  s.created = j.at("created").get<std::int64_t>();
  s.delivered = j.at("delivered").get<std::int64_t>();
  s.relays = j.at("relays").get<std::int64_t>();
  return s;
}

json stats_to_json(const EngineStats& s) {
  return json{{"contacts", s.contacts},
              {"transfers_started", s.transfers_started},
              {"transfers_completed", s.transfers_completed},
              {"transfers_aborted", s.transfers_aborted},
              {"buffer_drops", s.buffer_drops},
              {"refused", s.refused},
              {"expired", s.expired},
              {"copy_audits", s.copy_audits},
              {"copy_violations", s.copy_violations}};
}

EngineStats stats_from_json(const json& j) {
  EngineStats s;
  s.contacts = j.at("contacts").get<std::int64_t>();
  s.transfers_started = j.at("transfers_started").get<std::int64_t>();
  s.transfers_completed = j.at("transfers_completed").get<std::int64_t>();
  s.transfers_aborted = j.at("transfers_aborted").get<std::int64_t>();
  s.buffer_drops = j.at("buffer_drops").get<std::int64_t>();
  s.refused = j.at("refused").get<std::int64_t>();
  s.expired = j.at("expired").get<std::int64_t>();
  s.copy_audits = j.at("copy_audits").get<std::int64_t>();
  s.copy_violations = j.at("copy_violations").get<std::int64_t>();
  return s;
}

void write_csv_row(std::ostream& out, const MetricsSnapshot& s) {
  out << format_number(s.t_s / 3600.0) << ',' << format_number(s.delivery_ratio) << ','
      << format_number(s.overhead_ratio) << ',' << format_number(s.avg_latency_s) << ','
      << format_number(s.avg_hop_count) << ',' << s.created << ',' << s.delivered << ','
      << s.relays << '\n';
}

}  // namespace

double delivery_ratio(std::span<const DeliveryRecord> records, SimTime t) {
  return compute_snapshot(records, t).delivery_ratio;
}

double overhead_ratio(std::span<const DeliveryRecord> records, SimTime t) {
  return compute_snapshot(records, t).overhead_ratio;
}

MetricsSnapshot compute_snapshot(std::span<const DeliveryRecord> records, SimTime t) {
  std::int64_t created = 0;
  std::int64_t delivered = 0;
  std::int64_t relays = 0;
  std::int64_t latency_sum_us = 0;
  std::int64_t hop_sum = 0;
  for (const DeliveryRecord& r : records) {
    if (r.created_at > t) continue;
    ++created;
    relays += std::count_if(r.relay_times.begin(), r.relay_times.end(),
                            [t](SimTime rt) { return rt <= t; });
    if (r.delivered_at && *r.delivered_at <= t) {
      ++delivered;
      latency_sum_us += (*r.delivered_at - r.created_at).count();
      hop_sum += r.hop_count;
    }
  }
  return make_snapshot(t, created, delivered, relays, latency_sum_us, hop_sum);
}

void MetricsCollector::on_created(MessageId id, SimTime t) {
  if (t < warmup_) return;
  index_.emplace(to_index(id), records_.size());
  DeliveryRecord record;
  record.id = id;
  record.created_at = t;
  records_.push_back(std::move(record));
  ++created_;
}

DeliveryRecord* MetricsCollector::find(MessageId id) {
  auto it = index_.find(to_index(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

void MetricsCollector::on_relay(MessageId id, SimTime t) {
  DeliveryRecord* r = find(id);
  if (r == nullptr) return;
  r->relay_times.push_back(t);
  ++relays_;
}

bool MetricsCollector::on_delivered(MessageId id, SimTime t, int hop_count) {
  DeliveryRecord* r = find(id);
  if (r == nullptr || r->delivered_at) return false;
  r->delivered_at = t;
  r->hop_count = hop_count;
  ++delivered_;
  latency_sum_us_ += (t - r->created_at).count();
  hop_sum_ += hop_count;
  return true;
}

MetricsSnapshot MetricsCollector::snapshot(SimTime t) const {
  return make_snapshot(t, created_, delivered_, relays_, latency_sum_us_, hop_sum_);
}

double MetricsReport::raw_relay_quotient() const {
  if (final_snapshot.delivered == 0) return 0.0;
  return static_cast<double>(final_snapshot.relays) /
         static_cast<double>(final_snapshot.delivered);
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

void write_csv(const MetricsReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MetricsSnapshot& s : report.series) write_csv_row(out, s);
  if (report.router.empty() && report.config.empty()) return;
  // Trailing summary block; readers that only want the table stop at '#'.
  out << "# router=" << report.router << '\n';
  out << "# seed=" << report.seed << '\n';
  for (const auto& [key, value] : report.config) out << "# config." << key << '=' << value << '\n';
  const MetricsSnapshot& f = report.final_snapshot;
  out << "# final.t_hours=" << format_number(f.t_s / 3600.0) << '\n';
  out << "# final.delivery_ratio=" << format_number(f.delivery_ratio) << '\n';
  out << "# final.overhead_ratio=" << format_number(f.overhead_ratio) << '\n';
  out << "# final.raw_relay_quotient=" << format_number(report.raw_relay_quotient()) << '\n';
  out << "# final.avg_latency_s=" << format_number(f.avg_latency_s) << '\n';
  out << "# final.avg_hop_count=" << format_number(f.avg_hop_count) << '\n';
  out << "# final.created=" << f.created << '\n';
  out << "# final.delivered=" << f.delivered << '\n';
  out << "# final.relays=" << f.relays << '\n';
}

void write_json(const MetricsReport& report, std::ostream& out) {
  json config = json::array();
  for (const auto& [key, value] : report.config) config.push_back(json::array({key, value}));
  json series = json::array();
  for (const MetricsSnapshot& s : report.series) series.push_back(snapshot_to_json(s));
  json records = json::array();
  for (const DeliveryRecord& r : report.records) {
    json relay_times = json::array();
    for (SimTime t : r.relay_times) relay_times.push_back(t.count());
    records.push_back(json{
        {"id", to_index(r.id)},
        {"created_at_us", r.created_at.count()},
        {"delivered_at_us", r.delivered_at ? json(r.delivered_at->count()) : json(nullptr)},
        {"hop_count", r.hop_count},
        {"relay_times_us", std::move(relay_times)}});
  }
  json doc{{"router", report.router},
           {"seed", report.seed},
           {"config", std::move(config)},
           {"series", std::move(series)},
           {"final", snapshot_to_json(report.final_snapshot)},
           {"raw_relay_quotient", report.raw_relay_quotient()},
           {"stats", stats_to_json(report.stats)},
           {"records", std::move(records)}};
  out << doc.dump(1) << '\n';
}

std::string to_csv(const MetricsReport& report) {
  std::ostringstream out;
  write_csv(report, out);
  return out.str();
}

std::string to_json(const MetricsReport& report) {
  std::ostringstream out;
  write_json(report, out);
  return out.str();
}

MetricsReport report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  MetricsReport report;
  report.router = doc.at("router").get<std::string>();
  report.seed = doc.at("seed").get<std::uint64_t>();
  for (const json& kv : doc.at("config")) {
    report.config.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
  }
  for (const json& s : doc.at("series")) report.series.push_back(snapshot_from_json(s));
  report.final_snapshot = snapshot_from_json(doc.at("final"));
  report.stats = stats_from_json(doc.at("stats"));
  for (const json& r : doc.at("records")) {
    DeliveryRecord rec;
    rec.id = MessageId{r.at("id").get<std::uint64_t>()};
    rec.created_at = SimTime{r.at("created_at_us").get<std::int64_t>()};
    if (!r.at("delivered_at_us").is_null()) {
      rec.delivered_at = SimTime{r.at("delivered_at_us").get<std::int64_t>()};
    }
    rec.hop_count = r.at("hop_count").get<int>();
    for (const json& t : r.at("relay_times_us")) rec.relay_times.emplace_back(t.get<std::int64_t>());
    report.records.push_back(std::move(rec));
  }
  return report;
}

void export_report(const MetricsReport& report, const std::filesystem::path& path,
                   ReportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == ReportFormat::kCsv) {
    write_csv(report, out);
  } else {
    write_json(report, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace pis

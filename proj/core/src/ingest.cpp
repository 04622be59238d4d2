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

#include "pis/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "pis/metrics.hpp"

namespace pis {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view delimiters) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find_first_of(delimiters, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  for (std::string_view token : split(s, " \t")) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  token = trim(token);
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

template <typename T>
T require_number(std::string_view token, std::size_t line, std::string_view what) {
  auto value = parse_number<T>(token);
  if (!value) {
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(token) + "'");
  }
  return *value;
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  const auto lo = std::min(a, b);
  const auto hi = std::max(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

NormalizedTrace parse_normalized(std::istream& in) {
  NormalizedTrace trace;
  std::optional<std::size_t> declared_nodes;
  std::optional<double> declared_duration;
  std::string raw;
  std::size_t line_no = 0;
  std::uint32_t max_id = 0;
  bool any_event = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (std::string_view token : split_whitespace(line.substr(1))) {
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = token.substr(0, eq);
        const std::string_view value = token.substr(eq + 1);
        if (key == "nodes") {
          declared_nodes = require_number<std::size_t>(value, line_no, "node count");
        } else if (key == "duration") {
          declared_duration = require_number<double>(value, line_no, "duration");
        } else if (key == "epoch") {
          trace.epoch = require_number<double>(value, line_no, "epoch");
        }
      }
      continue;
    }
    const auto fields = split_whitespace(line);
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 'time node_a node_b up|down'");
    }
    ContactEvent ev;
    ev.time = require_number<double>(fields[0], line_no, "time");
    const auto a = require_number<std::uint32_t>(fields[1], line_no, "node id");
    const auto b = require_number<std::uint32_t>(fields[2], line_no, "node id");
    ev.a = NodeId{a};
    ev.b = NodeId{b};
    if (fields[3] == "up") {
      ev.kind = LinkEvent::kUp;
    } else if (fields[3] == "down") {
      ev.kind = LinkEvent::kDown;
    } else {
      throw ParseError(line_no, "event kind must be 'up' or 'down'");
    }
    max_id = std::max({max_id, a, b});
    any_event = true;
    trace.events.push_back(ev);
    trace.lines.push_back(line_no);
  }
  trace.num_nodes = declared_nodes.value_or(any_event ? max_id + 1u : 0u);
  trace.duration = declared_duration.value_or(trace.events.empty() ? 0.0 : trace.events.back().time);
  validate_trace(trace);
  return trace;
}

// `time;user;seen_user[;...]` rows, ';' or ',' separated; one non-numeric
// header row is tolerated.
std::vector<Sighting> read_sigcomm09(std::istream& in, const ConvertOptions& options) {
  std::vector<Sighting> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ";,");
    if (fields.size() < 3) throw ParseError(line_no, "expected 'time;user_id;seen_user_id'");
    if (!parse_number<double>(fields[0])) {
      if (line_no == 1) continue;  // column header
      throw ParseError(line_no, "invalid time '" + std::string(fields[0]) + "'");
    }
    const auto t = require_number<double>(fields[0], line_no, "time");
    const auto a = require_number<std::uint32_t>(fields[1], line_no, "user id");
    const auto b = require_number<std::uint32_t>(fields[2], line_no, "user id");
    if (a < options.id_offset || b < options.id_offset) {
      throw ParseError(line_no, "node id below id offset");
    }
    if (!out.empty() && t < out.back().start) {
      throw ParseError(line_no, "time goes backwards");
    }
    if (a == b) continue;
    out.push_back({t, t, a - options.id_offset, b - options.id_offset});
  }
  return out;
}

// Haggle iMote contact records: `id1 id2 start end [seq gap]`, whitespace
// separated, sorted by start time.
std::vector<Sighting> read_infocom06(std::istream& in, const ConvertOptions& options) {
  std::vector<Sighting> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_whitespace(line);
    if (fields.size() < 4) throw ParseError(line_no, "expected 'id1 id2 start end [seq gap]'");
    const auto a = require_number<std::uint32_t>(fields[0], line_no, "node id");
    const auto b = require_number<std::uint32_t>(fields[1], line_no, "node id");
    const auto start = require_number<double>(fields[2], line_no, "start time");
    const auto end = require_number<double>(fields[3], line_no, "end time");
    if (end < start) throw ParseError(line_no, "contact ends before it starts");
    if (a < options.id_offset || b < options.id_offset) {
      throw ParseError(line_no, "node id below id offset");
    }
    if (!out.empty() && start < out.back().start) {
      throw ParseError(line_no, "time goes backwards");
    }
    if (a == b) continue;
    out.push_back({start, end, a - options.id_offset, b - options.id_offset});
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "normalized") return TraceFormat::kNormalized;
  if (name == "sigcomm09") return TraceFormat::kSigcomm09;
  if (name == "infocom06") return TraceFormat::kInfocom06;
  throw std::invalid_argument("unknown trace format '" + std::string(name) + "'");
}

std::string_view trace_format_name(TraceFormat format) {
  switch (format) {
    case TraceFormat::kNormalized: return "normalized";
    case TraceFormat::kSigcomm09: return "sigcomm09";
    case TraceFormat::kInfocom06: return "infocom06";
  }
  return "unknown";
}

NormalizedTrace coalesce_sightings(std::vector<Sighting> sightings, const ConvertOptions& options) {
  NormalizedTrace trace;
  if (sightings.empty()) return trace;

  double origin = sightings.front().start;
  std::uint32_t max_id = 0;
  for (const Sighting& s : sightings) {
    origin = std::min(origin, s.start);
    max_id = std::max({max_id, s.a, s.b});
  }

  // Per unordered pair, sorted intervals.
  std::map<std::uint64_t, std::vector<std::pair<double, double>>> per_pair;
  for (const Sighting& s : sightings) {
    per_pair[pair_key(s.a, s.b)].emplace_back(s.start - origin, s.end - origin);
  }

  std::vector<ContactEvent> events;
  for (auto& [key, intervals] : per_pair) {
    std::sort(intervals.begin(), intervals.end());
    const NodeId a{static_cast<std::uint32_t>(key >> 32)};
    const NodeId b{static_cast<std::uint32_t>(key & 0xffffffffu)};
    std::vector<std::pair<double, double>> merged;
    for (const auto& [start, end] : intervals) {
      if (!merged.empty() && start - merged.back().second <= options.gap_threshold_s) {
        merged.back().second = std::max(merged.back().second, end);
      } else {
        merged.emplace_back(start, end);
      }
    }
    for (std::size_t i = 0; i < merged.size(); ++i) {
      double down = merged[i].second + options.sampling_period_s;
      if (i + 1 < merged.size()) down = std::min(down, merged[i + 1].first);
      events.push_back({merged[i].first, a, b, LinkEvent::kUp});
      events.push_back({down, a, b, LinkEvent::kDown});
    }
  }
  // Same ordering the engine uses: time, then down before up, then pair.
  std::sort(events.begin(), events.end(), [](const ContactEvent& x, const ContactEvent& y) {
    if (x.time != y.time) return x.time < y.time;
    if (x.kind != y.kind) return x.kind == LinkEvent::kDown;
    return pair_key(to_index(x.a), to_index(x.b)) < pair_key(to_index(y.a), to_index(y.b));
  });

  trace.num_nodes = max_id + 1u;
  trace.epoch = origin;
  trace.duration = events.empty() ? 0.0 : events.back().time;
  trace.events = std::move(events);
  return trace;
}

NormalizedTrace parse_trace(std::istream& in, TraceFormat format, const ConvertOptions& options) {
  switch (format) {
    case TraceFormat::kNormalized:
      return parse_normalized(in);
    case TraceFormat::kSigcomm09:
      return coalesce_sightings(read_sigcomm09(in, options), options);
    case TraceFormat::kInfocom06:
      return coalesce_sightings(read_infocom06(in, options), options);
  }
  throw std::invalid_argument("unknown trace format");
}

NormalizedTrace parse_trace(const std::filesystem::path& path, TraceFormat format,
                            const ConvertOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  return parse_trace(in, format, options);
}

void validate_trace(const NormalizedTrace& trace) {
  std::set<std::uint64_t> up_pairs;
  double last_time = 0.0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const ContactEvent& ev = trace.events[i];
    const std::size_t line = i < trace.lines.size() ? trace.lines[i] : 0;
    const std::string where = line > 0 ? "" : "event #" + std::to_string(i + 1) + ": ";
    if (!(ev.time >= 0.0) || !std::isfinite(ev.time)) {
      throw ParseError(line, where + "time must be finite and non-negative");
    }
    if (i > 0 && ev.time < last_time) throw ParseError(line, where + "time goes backwards");
    last_time = ev.time;
    if (ev.a == ev.b) throw ParseError(line, where + "node contacts itself");
    if (to_index(ev.a) >= trace.num_nodes || to_index(ev.b) >= trace.num_nodes) {
      throw ParseError(line, where + "node id outside declared node count " +
                                 std::to_string(trace.num_nodes));
    }
    const auto key = pair_key(to_index(ev.a), to_index(ev.b));
    if (ev.kind == LinkEvent::kUp) {
      if (!up_pairs.insert(key).second) throw ParseError(line, where + "link already up");
    } else if (up_pairs.erase(key) == 0) {
      throw ParseError(line, where + "link down without matching up");
    }
  }
}

void write_trace(const NormalizedTrace& trace, std::ostream& out) {
  out << "# nodes=" << trace.num_nodes << " duration=" << format_number(trace.duration);
  if (trace.epoch != 0.0) out << " epoch=" << format_number(trace.epoch);
  out << '\n';
  for (const ContactEvent& ev : trace.events) {
    out << format_number(ev.time) << ' ' << to_index(ev.a) << ' ' << to_index(ev.b) << ' '
        << (ev.kind == LinkEvent::kUp ? "up" : "down") << '\n';
  }
}

std::string serialize_trace(const NormalizedTrace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

// ProfileStore

const Profile& ProfileStore::profile(NodeId node) const {
  static const Profile kEmpty;
  const auto i = to_index(node);
  return i < profiles_.size() ? profiles_[i] : kEmpty;
}

void ProfileStore::ensure_size(std::size_t n) {
  if (profiles_.size() < n) profiles_.resize(n);
}

InterestId ProfileStore::intern(const std::string& interest) {
  auto [it, inserted] =
      interest_ids_.try_emplace(interest, InterestId{static_cast<std::uint32_t>(interest_names_.size())});
  if (inserted) interest_names_.push_back(interest);
  return it->second;
}

std::optional<InterestId> ProfileStore::find_interest(const std::string& interest) const {
  auto it = interest_ids_.find(interest);
  if (it == interest_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& ProfileStore::interest_name(InterestId id) const {
  return interest_names_.at(to_index(id));
}

void ProfileStore::add_friendship(NodeId x, NodeId y) {
  if (x == y) return;
  ensure_size(std::max(to_index(x), to_index(y)) + 1u);
  profiles_[to_index(x)].friends.insert(y);
  profiles_[to_index(y)].friends.insert(x);
}

void ProfileStore::add_interest(NodeId node, InterestId interest) {
  ensure_size(to_index(node) + 1u);
  profiles_[to_index(node)].interests.insert(interest);
}

ProfileStore parse_profiles(std::istream& in, std::optional<std::size_t> num_nodes) {
  ProfileStore store;
  if (num_nodes) store.ensure_size(*num_nodes);
  std::set<std::uint32_t> seen;
  std::map<std::string, std::vector<NodeId>> language_groups;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, "|");
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 'node_id | interests | friends'");
    }
    const auto id = require_number<std::uint32_t>(fields[0], line_no, "node id");
    if (!seen.insert(id).second) {
      throw ParseError(line_no, "duplicate profile for node " + std::to_string(id));
    }
    if (num_nodes && id >= *num_nodes) {
      store.warn("line " + std::to_string(line_no) + ": node " + std::to_string(id) +
                 " does not appear in the trace");
    }
    const NodeId node{id};
    store.ensure_size(id + 1u);
    for (std::string_view token : split(fields[1], ",")) {
      token = trim(token);
      if (token.empty()) continue;
      store.add_interest(node, store.intern(std::string(token)));
    }
    for (std::string_view token : split(fields[2], ",")) {
      token = trim(token);
      if (token.empty()) continue;
      if (token.starts_with("lang:")) {
        language_groups[std::string(token.substr(5))].push_back(node);
        continue;
      }
      const auto friend_id = require_number<std::uint32_t>(token, line_no, "friend id");
      store.add_friendship(node, NodeId{friend_id});
    }
  }
  for (const auto& [tag, members] : language_groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        store.add_friendship(members[i], members[j]);
      }
    }
  }
  return store;
}

ProfileStore parse_profiles(const std::filesystem::path& path, std::optional<std::size_t> num_nodes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profiles " + path.string());
  return parse_profiles(in, num_nodes);
}

}  // namespace pis

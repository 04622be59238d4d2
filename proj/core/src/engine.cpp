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

#include "pis/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace pis {

void EngineConfig::validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(warmup_s >= 0.0 && warmup_s < duration_s)) {
    throw std::invalid_argument("warmup must be in [0, duration)");
  }
  if (!(transmit_speed > 0.0)) throw std::invalid_argument("transmit speed must be positive");
  if (!(message_interval_min_s > 0.0 && message_interval_min_s <= message_interval_max_s)) {
    throw std::invalid_argument("message interval range must be positive and non-empty");
  }
  if (message_size_min <= 0 || message_size_min > message_size_max) {
    throw std::invalid_argument("message size range must be positive and non-empty");
  }
  if (!(ttl_s > 0.0)) throw std::invalid_argument("ttl must be positive");
  if (buffer_capacity <= 0) throw std::invalid_argument("buffer capacity must be positive");
  if (!(snapshot_interval_s > 0.0)) throw std::invalid_argument("snapshot interval must be positive");
}

// MessageBuffer

MessageBuffer::Admission MessageBuffer::enforce(const Message& incoming, SimTime now) {
  Admission result;
  if (incoming.size > capacity_) return result;
  while (free_space() < incoming.size) {
    BufferedMessage& oldest = entries_.front();
    used_ -= oldest.message.size;
    result.dropped.push_back(std::move(oldest.message));
    entries_.erase(entries_.begin());
  }
  entries_.push_back({incoming, now});
  used_ += incoming.size;
  result.accepted = true;
  return result;
}

std::vector<Message> MessageBuffer::expire(SimTime now) {
  std::vector<Message> expired;
  auto keep = std::stable_partition(entries_.begin(), entries_.end(),
                                    [now](const BufferedMessage& b) { return !b.message.expired(now); });
  for (auto it = keep; it != entries_.end(); ++it) {
    used_ -= it->message.size;
    expired.push_back(std::move(it->message));
  }
  entries_.erase(keep, entries_.end());
  return expired;
}

std::optional<Message> MessageBuffer::remove(MessageId id) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [id](const BufferedMessage& b) { return b.message.id == id; });
  if (it == entries_.end()) return std::nullopt;
  Message m = std::move(it->message);
  used_ -= m.size;
  entries_.erase(it);
  return m;
}

Message* MessageBuffer::find(MessageId id) {
  for (BufferedMessage& b : entries_) {
    if (b.message.id == id) return &b.message;
  }
  return nullptr;
}

const Message* MessageBuffer::find(MessageId id) const {
  for (const BufferedMessage& b : entries_) {
    if (b.message.id == id) return &b.message;
  }
  return nullptr;
}

MessageBuffer::Admission enforce_buffer(MessageBuffer& buffer, const Message& incoming, SimTime now) {
  return buffer.enforce(incoming, now);
}

std::vector<MessageId> expire_ttl(MessageBuffer& buffer, SimTime now) {
  std::vector<MessageId> ids;
  for (const Message& m : buffer.expire(now)) ids.push_back(m.id);
  return ids;
}

std::vector<MessageSpec> generate_workload(const EngineConfig& config, std::size_t num_nodes) {
  std::vector<MessageSpec> out;
  if (num_nodes < 2) return out;
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> interval(config.message_interval_min_s,
                                                  config.message_interval_max_s);
  std::uniform_int_distribution<std::int64_t> size(config.message_size_min,
                                                   config.message_size_max);
  std::uniform_int_distribution<std::uint32_t> src_pick(0, static_cast<std::uint32_t>(num_nodes - 1));
  std::uniform_int_distribution<std::uint32_t> dst_pick(0, static_cast<std::uint32_t>(num_nodes - 2));
  const SimTime end = from_seconds(config.duration_s);
  SimTime t = from_seconds(config.warmup_s);
  std::uint64_t next_id = 1;
  while (true) {
    t += from_seconds(interval(rng));
    if (t >= end) break;
    const std::uint32_t src = src_pick(rng);
    std::uint32_t dst = dst_pick(rng);
    if (dst >= src) ++dst;
    out.push_back({MessageId{next_id++}, NodeId{src}, NodeId{dst}, size(rng), t});
  }
  return out;
}

// Simulation

namespace {

enum class EventKind : std::uint8_t {
  kTransferDone = 0,
  kLinkDown = 1,
  kLinkUp = 2,
  kMessageCreate = 3,
  kSnapshot = 4,
};

struct Event {
  SimTime time;
  EventKind kind;
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  std::uint64_t seq = 0;
  std::uint64_t payload = 0;  // session for transfers, workload index for creations

  auto key() const { return std::tie(time, kind, lo, hi, seq); }
};

struct LaterFirst {
  bool operator()(const Event& x, const Event& y) const { return x.key() > y.key(); }
};

struct Link {
  bool up = false;
  std::uint64_t session = 0;
  std::deque<TransferDirective> queue;
  std::optional<TransferDirective> in_flight;
};

struct CopyAccount {
  std::int64_t initial = 0;
  std::int64_t consumed = 0;
};

std::uint64_t link_key(std::uint32_t lo, std::uint32_t hi) {
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

struct Simulation::Impl {
  Impl(const NormalizedTrace& trace_in, const ProfileStore& profile_store, Router& router_in,
       EngineConfig config_in)
      : trace(trace_in),
        router(router_in),
        config(config_in),
        collector(from_seconds(config_in.warmup_s)) {
    config.validate();
    validate_trace(trace);
    profiles = profile_store.profiles();
    if (profiles.size() < trace.num_nodes) profiles.resize(trace.num_nodes);
    buffers.assign(trace.num_nodes, MessageBuffer(config.buffer_capacity));
    peers.resize(trace.num_nodes);
    accounting = router.conserves_copies();
  }

  const NormalizedTrace& trace;
  Router& router;
  EngineConfig config;
  std::vector<Profile> profiles;
  std::vector<MessageBuffer> buffers;
  std::vector<std::set<std::uint32_t>> peers;
  std::unordered_map<std::uint64_t, Link> links;
  std::priority_queue<Event, std::vector<Event>, LaterFirst> events;
  std::vector<MessageSpec> workload;
  MetricsCollector collector;
  EngineStats stats;
  std::vector<MetricsSnapshot> series;
  bool accounting = false;
  std::map<std::uint64_t, CopyAccount> open_accounts;
  std::function<void(const Simulation&, SimTime)> observer;
  std::uint64_t next_seq = 0;

  void push(SimTime t, EventKind kind, std::uint32_t lo, std::uint32_t hi, std::uint64_t payload) {
    events.push(Event{t, kind, lo, hi, next_seq++, payload});
  }

  void consume(MessageId id, std::int64_t copies) {
    if (!accounting) return;
    auto it = open_accounts.find(to_index(id));
    if (it == open_accounts.end()) return;
    it->second.consumed += copies;
    if (it->second.consumed == it->second.initial) open_accounts.erase(it);
  }

  std::int64_t count_violations() const {
    if (!accounting) return 0;
    std::map<std::uint64_t, std::int64_t> live;
    for (const MessageBuffer& b : buffers) {
      for (const BufferedMessage& e : b.contents()) live[to_index(e.message.id)] += e.message.nof_copy;
    }
    std::int64_t violations = 0;
    for (const auto& [id, account] : open_accounts) {
      auto it = live.find(id);
      const std::int64_t held = it == live.end() ? 0 : it->second;
      if (held + account.consumed != account.initial) ++violations;
    }
    for (const auto& [id, held] : live) {
      if (!open_accounts.contains(id)) ++violations;  // replicas of a closed budget
    }
    return violations;
  }

  SimTime transfer_time(std::int64_t size) const {
    const SimTime d = from_seconds(static_cast<double>(size) / config.transmit_speed);
    return std::max(d, SimTime{1});
  }

  void expire_all(SimTime now) {
    for (MessageBuffer& b : buffers) {
      for (const Message& m : b.expire(now)) {
        ++stats.expired;
        consume(m.id, m.nof_copy);
      }
    }
  }

  bool directive_valid(const TransferDirective& d) const {
    const Message* m = buffers[to_index(d.from)].find(d.message);
    if (m == nullptr) return false;
    if (d.to == m->dst) return true;
    if (buffers[to_index(d.to)].holds(d.message)) return false;
    if (d.mode == TransferMode::kSplit && m->nof_copy < 2) return false;
    return true;
  }

  void start_next(Link& link, std::uint32_t lo, std::uint32_t hi, SimTime now) {
    while (!link.in_flight && !link.queue.empty()) {
      TransferDirective d = link.queue.front();
      link.queue.pop_front();
      if (!directive_valid(d)) continue;
      const Message* m = buffers[to_index(d.from)].find(d.message);
      link.in_flight = d;
      ++stats.transfers_started;
      push(now + transfer_time(m->size), EventKind::kTransferDone, lo, hi, link.session);
    }
  }

  void plan(std::uint32_t lo, std::uint32_t hi, SimTime now) {
    Link& link = links[link_key(lo, hi)];
    if (!link.up || link.in_flight || !link.queue.empty()) return;
    std::vector<TransferDirective> directives =
        router.plan_transfers(NodeId{lo}, NodeId{hi}, now, *owner);
    // Deliveries go first on every link, whatever the router.
    std::stable_partition(directives.begin(), directives.end(), [&](const TransferDirective& d) {
      const Message* m = buffers[to_index(d.from)].find(d.message);
      return m != nullptr && m->dst == d.to;
    });
    for (const TransferDirective& d : directives) {
      const auto from = to_index(d.from);
      const auto to = to_index(d.to);
      if (!((from == lo && to == hi) || (from == hi && to == lo))) {
        throw std::logic_error("router planned a transfer outside the link");
      }
      link.queue.push_back(d);
    }
    start_next(link, lo, hi, now);
  }

  void replan_idle_links(std::uint32_t node, SimTime now) {
    // Copy: planning may not change peers, but iterate over a stable snapshot.
    const std::vector<std::uint32_t> current(peers[node].begin(), peers[node].end());
    for (std::uint32_t peer : current) {
      plan(std::min(node, peer), std::max(node, peer), now);
    }
  }

  // Applies a finished transfer. Returns the receiving node when it now
  // stores a new replica.
  std::optional<std::uint32_t> complete(const TransferDirective& d, SimTime now) {
    MessageBuffer& from_buffer = buffers[to_index(d.from)];
    Message* sender = from_buffer.find(d.message);
    if (sender == nullptr) {
      ++stats.transfers_aborted;
      return std::nullopt;
    }
    if (d.to == sender->dst) {
      ++stats.transfers_completed;
      collector.on_relay(d.message, now);
      collector.on_delivered(d.message, now, sender->hop_count + 1);
      consume(d.message, sender->nof_copy);
      from_buffer.remove(d.message);
      return std::nullopt;
    }
    if (buffers[to_index(d.to)].holds(d.message)) {
      ++stats.transfers_aborted;
      return std::nullopt;
    }
    Message replica = *sender;
    replica.hop_count += 1;
    int given = sender->nof_copy;
    if (d.mode == TransferMode::kSplit) {
      if (sender->nof_copy < 2) {
        ++stats.transfers_aborted;
        return std::nullopt;
      }
      given = sender->nof_copy / 2;
    }
    replica.nof_copy = given;

    MessageBuffer& to_buffer = buffers[to_index(d.to)];
    MessageBuffer::Admission admission = to_buffer.enforce(replica, now);
    for (const Message& dropped : admission.dropped) {
      ++stats.buffer_drops;
      consume(dropped.id, dropped.nof_copy);
    }
    if (!admission.accepted) {
      ++stats.refused;
      ++stats.transfers_aborted;
      return std::nullopt;
    }
    ++stats.transfers_completed;
    collector.on_relay(d.message, now);
    router.on_message_received(d.to, *to_buffer.find(d.message), now);

    // The receiver's eviction never touches the sender's buffer, so `sender`
    // is still valid here.
    switch (d.mode) {
      case TransferMode::kCopy:
        break;
      case TransferMode::kSplit:
        sender->nof_copy -= given;
        break;
      case TransferMode::kHandoff:
        from_buffer.remove(d.message);
        break;
    }
    return to_index(d.to);
  }

  void on_transfer_done(const Event& ev) {
    auto it = links.find(link_key(ev.lo, ev.hi));
    if (it == links.end()) return;
    Link& link = it->second;
    if (!link.up || link.session != ev.payload || !link.in_flight) return;  // aborted earlier
    const TransferDirective d = *link.in_flight;
    link.in_flight.reset();
    const std::optional<std::uint32_t> receiver = complete(d, ev.time);
    if (link.queue.empty()) {
      plan(ev.lo, ev.hi, ev.time);
    } else {
      start_next(link, ev.lo, ev.hi, ev.time);
    }
    if (receiver) replan_idle_links(*receiver, ev.time);
  }

  void on_link_up(const Event& ev) {
    Link& link = links[link_key(ev.lo, ev.hi)];
    link.up = true;
    ++link.session;
    link.queue.clear();
    link.in_flight.reset();
    ++stats.contacts;
    peers[ev.lo].insert(ev.hi);
    peers[ev.hi].insert(ev.lo);
    router.on_link_up(NodeId{ev.lo}, NodeId{ev.hi}, ev.time);
    plan(ev.lo, ev.hi, ev.time);
  }

  void on_link_down(const Event& ev) {
    Link& link = links[link_key(ev.lo, ev.hi)];
    if (link.in_flight) ++stats.transfers_aborted;
    link.in_flight.reset();
    link.queue.clear();
    link.up = false;
    peers[ev.lo].erase(ev.hi);
    peers[ev.hi].erase(ev.lo);
  }

  void on_message_create(const Event& ev) {
    const MessageSpec& spec = workload[ev.payload];
    Message m;
    m.id = spec.id;
    m.src = spec.src;
    m.dst = spec.dst;
    m.size = spec.size;
    m.created_at = spec.created_at;
    m.ttl = from_seconds(config.ttl_s);
    m.nof_copy = router.initial_copies();
    collector.on_created(m.id, ev.time);
    if (accounting) open_accounts[to_index(m.id)] = CopyAccount{m.nof_copy, 0};
    MessageBuffer::Admission admission = buffers[to_index(m.src)].enforce(m, ev.time);
    for (const Message& dropped : admission.dropped) {
      ++stats.buffer_drops;
      consume(dropped.id, dropped.nof_copy);
    }
    if (!admission.accepted) {
      ++stats.refused;
      consume(m.id, m.nof_copy);
      return;
    }
    replan_idle_links(to_index(m.src), ev.time);
  }

  MetricsReport run() {
    const SimTime end = from_seconds(config.duration_s);
    router.initialize(profiles);

    for (const ContactEvent& ce : trace.events) {
      const SimTime t = from_seconds(ce.time);
      if (t > end) break;
      const auto a = to_index(ce.a);
      const auto b = to_index(ce.b);
      push(t, ce.kind == LinkEvent::kUp ? EventKind::kLinkUp : EventKind::kLinkDown,
           std::min(a, b), std::max(a, b), 0);
    }
    workload = generate_workload(config, trace.num_nodes);
    for (std::size_t i = 0; i < workload.size(); ++i) {
      push(workload[i].created_at, EventKind::kMessageCreate, 0, 0, i);
    }
    const SimTime step = from_seconds(config.snapshot_interval_s);
    for (SimTime t = step; t < end; t += step) push(t, EventKind::kSnapshot, 0, 0, 0);
    push(end, EventKind::kSnapshot, 0, 0, 0);

    while (!events.empty()) {
      const Event ev = events.top();
      events.pop();
      if (ev.time > end) break;
      expire_all(ev.time);
      switch (ev.kind) {
        case EventKind::kTransferDone: on_transfer_done(ev); break;
        case EventKind::kLinkDown: on_link_down(ev); break;
        case EventKind::kLinkUp: on_link_up(ev); break;
        case EventKind::kMessageCreate: on_message_create(ev); break;
        case EventKind::kSnapshot: series.push_back(collector.snapshot(ev.time)); break;
      }
      if (config.audit_copies && accounting) {
        ++stats.copy_audits;
        stats.copy_violations += count_violations();
      }
      if (observer) observer(*owner, ev.time);
    }

    MetricsReport report;
    report.router = router.name();
    report.seed = config.rng_seed;
    report.series = std::move(series);
    report.final_snapshot = collector.snapshot(end);
    report.records = collector.records();
    report.stats = stats;
    return report;
  }

  Simulation* owner = nullptr;
};

Simulation::Simulation(const NormalizedTrace& trace, const ProfileStore& profiles, Router& router,
                       EngineConfig config)
    : impl_(std::make_unique<Impl>(trace, profiles, router, config)) {
  impl_->owner = this;
}

Simulation::~Simulation() = default;

MetricsReport Simulation::run() { return impl_->run(); }

void Simulation::set_event_observer(std::function<void(const Simulation&, SimTime)> observer) {
  impl_->observer = std::move(observer);
}

std::span<const BufferedMessage> Simulation::buffer(NodeId node) const {
  return impl_->buffers.at(to_index(node)).contents();
}

bool Simulation::holds(NodeId node, MessageId id) const {
  return impl_->buffers.at(to_index(node)).holds(id);
}

std::size_t Simulation::num_nodes() const { return impl_->buffers.size(); }

const EngineStats& Simulation::stats() const { return impl_->stats; }

std::int64_t Simulation::copy_violations() const { return impl_->count_violations(); }

MetricsReport run(const NormalizedTrace& trace, const ProfileStore& profiles, Router& router,
                  const EngineConfig& config) {
  Simulation sim(trace, profiles, router, config);
  return sim.run();
}

}  // namespace pis

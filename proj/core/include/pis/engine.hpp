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

#ifndef PIS_ENGINE_HPP_
#define PIS_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pis/ingest.hpp"
#include "pis/metrics.hpp"
#include "pis/model.hpp"
#include "pis/router.hpp"

namespace pis {

// Defaults: 40 h runs, 5000 s warmup, 250 kB/s links, a message every
// 500-650 s of 500-1024 kB, 10 h TTL and 5 MB buffers.
struct EngineConfig {
  double duration_s = 144000.0;
  double warmup_s = 5000.0;
  double transmit_speed = 250000.0;  // bytes per second
  double message_interval_min_s = 500.0;
  double message_interval_max_s = 650.0;
  std::int64_t message_size_min = 500000;
  std::int64_t message_size_max = 1024000;
  double ttl_s = 36000.0;
  std::int64_t buffer_capacity = 5000000;
  std::uint64_t rng_seed = 1;
  double snapshot_interval_s = 3600.0;
  // Check copy conservation after every event (routers with a copy budget).
  bool audit_copies = false;

  void validate() const;
};

// FIFO message store with a byte budget.
class MessageBuffer {
 public:
  explicit MessageBuffer(std::int64_t capacity = 0) : capacity_(capacity) {}

  struct Admission {
    bool accepted = false;
    std::vector<Message> dropped;  // evicted to make room, oldest first
  };

  // Evicts oldest-received replicas until `incoming` fits. A message larger
  // than the whole capacity is refused and nothing is evicted.
  Admission enforce(const Message& incoming, SimTime now);

  // Removes and returns every replica older than its TTL.
  std::vector<Message> expire(SimTime now);

  std::optional<Message> remove(MessageId id);
  Message* find(MessageId id);
  const Message* find(MessageId id) const;
  bool holds(MessageId id) const { return find(id) != nullptr; }

  std::span<const BufferedMessage> contents() const { return entries_; }
  std::int64_t used() const { return used_; }
  std::int64_t capacity() const { return capacity_; }
  std::int64_t free_space() const { return capacity_ - used_; }

 private:
  std::int64_t capacity_;
  std::int64_t used_ = 0;
  std::vector<BufferedMessage> entries_;  // in receive order
};

// Convenience wrappers used by tests and tools.
MessageBuffer::Admission enforce_buffer(MessageBuffer& buffer, const Message& incoming, SimTime now);
std::vector<MessageId> expire_ttl(MessageBuffer& buffer, SimTime now);

struct MessageSpec {
  MessageId id{};
  NodeId src{};
  NodeId dst{};
  std::int64_t size = 0;
  SimTime created_at{};

  friend bool operator==(const MessageSpec&, const MessageSpec&) = default;
};

// Unicast workload: uniform inter-arrival times and sizes, uniform distinct
// (src, dst). Depends only on the config and node count, so every router sees
// the same messages for a given seed. Nothing is generated during warmup.
std::vector<MessageSpec> generate_workload(const EngineConfig& config, std::size_t num_nodes);

// Discrete-event replay of one trace under one router.
//
// Events at equal timestamps run in the order (transfer completion, link down,
// link up, message creation, snapshot), then by node pair. TTL expiry is
// applied at every event boundary.
class Simulation final : public NetworkView {
 public:
  Simulation(const NormalizedTrace& trace, const ProfileStore& profiles, Router& router,
             EngineConfig config);
  ~Simulation() override;

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  MetricsReport run();

  // Invoked after every processed event.
  void set_event_observer(std::function<void(const Simulation&, SimTime)> observer);

  std::span<const BufferedMessage> buffer(NodeId node) const override;
  bool holds(NodeId node, MessageId id) const override;

  std::size_t num_nodes() const;
  const EngineStats& stats() const;

  // Per-message copy budget accounting: live copies across buffers plus
  // consumed copies must equal the initial budget. Returns the number of
  // messages violating that right now.
  std::int64_t copy_violations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsReport run(const NormalizedTrace& trace, const ProfileStore& profiles, Router& router,
                  const EngineConfig& config);

}  // namespace pis

#endif  // PIS_ENGINE_HPP_

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

#ifndef PIS_MODEL_HPP_
#define PIS_MODEL_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace pis {

// Dense node index in [0, N).
enum class NodeId : std::uint32_t {};
// Interned interest topic.
enum class InterestId : std::uint32_t {};
enum class MessageId : std::uint64_t {};

constexpr std::uint32_t to_index(NodeId n) { return static_cast<std::uint32_t>(n); }
constexpr std::uint32_t to_index(InterestId i) { return static_cast<std::uint32_t>(i); }
constexpr std::uint64_t to_index(MessageId m) { return static_cast<std::uint64_t>(m); }

// Simulation time. Integer microseconds keep event ordering and metric sums
// exact across runs.
using SimTime = std::chrono::microseconds;

constexpr double to_seconds(SimTime t) { return static_cast<double>(t.count()) / 1e6; }
SimTime from_seconds(double seconds);

enum class LinkEvent : std::uint8_t { kUp, kDown };

struct ContactEvent {
  double time = 0.0;  // seconds since trace epoch
  NodeId a{};
  NodeId b{};
  LinkEvent kind = LinkEvent::kUp;

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

// Maps simulation time onto a cyclic slot-of-day index. The default cycle is
// one day of 24 one-hour slots.
class SlotClock {
 public:
  SlotClock() = default;
  SlotClock(double slot_duration_s, int slots_per_cycle);

  double slot_duration() const { return slot_duration_; }
  int slots_per_cycle() const { return slots_per_cycle_; }
  double cycle_length() const { return slot_duration_ * slots_per_cycle_; }

  // floor(t / slot_duration) mod slots_per_cycle. Requires t >= 0.
  int slot_of(double t_seconds) const;

  // [current, current+1, ..., current+count-1], each taken mod slots_per_cycle.
  // Position k in the result carries the weight beta^(k+1).
  std::vector<int> lookback_slots(int current_slot, int count) const;

 private:
  double slot_duration_ = 3600.0;
  int slots_per_cycle_ = 24;
};

struct SimilarityTriple {
  double pro = 0.0;
  double ins = 0.0;
  double soc = 0.0;

  friend bool operator==(const SimilarityTriple&, const SimilarityTriple&) = default;
};

// One buffered replica of a message.
struct Message {
  MessageId id{};
  NodeId src{};
  NodeId dst{};
  std::int64_t size = 0;  // bytes
  SimTime created_at{};
  SimTime ttl{};
  int nof_copy = 1;
  int hop_count = 0;
  // Triple of the carrier that last accepted this replica, toward dst.
  std::optional<SimilarityTriple> attached_sim;

  bool expired(SimTime now) const { return now - created_at > ttl; }
};

// Static social ground truth for one node.
struct Profile {
  std::set<InterestId> interests;
  std::set<NodeId> friends;
};

}  // namespace pis

#endif  // PIS_MODEL_HPP_

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

#ifndef PIS_SOCIAL_STATE_HPP_
#define PIS_SOCIAL_STATE_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "pis/model.hpp"

namespace pis {

// (node, degree) pairs: how often each peer was met in one slot-of-day.
using ContactList = std::map<NodeId, std::int64_t>;

// Sparse symmetric contact-frequency matrix for one slot-of-day. Every write
// goes to both (x, y) and (y, x); the diagonal is never stored.
class EgoMatrix {
 public:
  std::int64_t get(NodeId x, NodeId y) const;
  void set(NodeId x, NodeId y, std::int64_t frequency);

  // Nodes with a non-zero entry in row x.
  const std::map<NodeId, std::int64_t>& row(NodeId x) const;
  const std::map<NodeId, std::map<NodeId, std::int64_t>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

 private:
  std::map<NodeId, std::map<NodeId, std::int64_t>> rows_;
};

struct DegreeUpdate {
  std::int64_t initial_value = 1;
  std::int64_t incremental_value = 1;
};

// What one node remembers about a single slot-of-day.
struct SlotEntry {
  ContactList contacts;
  EgoMatrix ego;
  std::map<InterestId, std::int64_t> contact_interest;  // C_I
  std::map<NodeId, std::int64_t> indirect;              // In_So
};

// Per-node social memory, one SlotEntry per slot of the cycle. Entries
// accumulate across cycles and are never reset or decayed.
class SlotSocialState {
 public:
  SlotSocialState(NodeId owner, int slots_per_cycle, std::set<InterestId> self_interest,
                  std::set<NodeId> direct, DegreeUpdate degrees = {});

  NodeId owner() const { return owner_; }
  int slots() const { return static_cast<int>(slots_.size()); }
  const SlotEntry& slot(int index) const;
  const std::set<InterestId>& self_interest() const { return self_interest_; }
  const std::set<NodeId>& direct() const { return direct_; }

  // Counts one encounter with `peer` and mirrors the count into the ego row.
  void record_contact(NodeId peer, int slot);

  // Overwrites Ego[C][peer] with every degree the peer reports.
  void merge_peer_contact_list(NodeId peer, const ContactList& peer_contacts, int slot);

  void update_contact_interest(const std::set<InterestId>& peer_self_interest, int slot);

  // Friends of the peer become indirect relations, except the owner itself and
  // the owner's direct friends.
  void update_indirect_social(NodeId peer, const std::set<NodeId>& peer_direct, int slot);

 private:
  SlotEntry& mutable_slot(int index);

  NodeId owner_;
  std::set<InterestId> self_interest_;
  std::set<NodeId> direct_;
  DegreeUpdate degrees_;
  std::vector<SlotEntry> slots_;
};

// Both sides of an encounter: record the contact, then exchange contact lists,
// self interests and direct friends, and apply the three updates.
void exchange_social_information(SlotSocialState& a, SlotSocialState& b, int slot);

}  // namespace pis

#endif  // PIS_SOCIAL_STATE_HPP_

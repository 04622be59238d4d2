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

#include "pis/social_state.hpp"

#include <stdexcept>
#include <utility>

namespace pis {

namespace {

const std::map<NodeId, std::int64_t> kEmptyRow;

template <typename Key>
void bump(std::map<Key, std::int64_t>& degrees, Key key, const DegreeUpdate& update) {
  auto [it, inserted] = degrees.try_emplace(key, update.initial_value);
  if (!inserted) it->second += update.incremental_value;
}

}  // namespace

std::int64_t EgoMatrix::get(NodeId x, NodeId y) const {
  auto row_it = rows_.find(x);
  if (row_it == rows_.end()) return 0;
  auto it = row_it->second.find(y);
  return it == row_it->second.end() ? 0 : it->second;
}

void EgoMatrix::set(NodeId x, NodeId y, std::int64_t frequency) {
  if (x == y) return;
  if (frequency == 0) {
    if (auto it = rows_.find(x); it != rows_.end()) {
      it->second.erase(y);
      if (it->second.empty()) rows_.erase(it);
    }
    if (auto it = rows_.find(y); it != rows_.end()) {
      it->second.erase(x);
      if (it->second.empty()) rows_.erase(it);
    }
    return;
  }
  rows_[x][y] = frequency;
  rows_[y][x] = frequency;
}

const std::map<NodeId, std::int64_t>& EgoMatrix::row(NodeId x) const {
  auto it = rows_.find(x);
  return it == rows_.end() ? kEmptyRow : it->second;
}

SlotSocialState::SlotSocialState(NodeId owner, int slots_per_cycle,
                                 std::set<InterestId> self_interest, std::set<NodeId> direct,
                                 DegreeUpdate degrees)
    : owner_(owner),
      self_interest_(std::move(self_interest)),
      direct_(std::move(direct)),
      degrees_(degrees) {
  if (slots_per_cycle < 1) throw std::invalid_argument("slots_per_cycle must be >= 1");
  direct_.erase(owner_);
  slots_.resize(static_cast<std::size_t>(slots_per_cycle));
}

const SlotEntry& SlotSocialState::slot(int index) const {
  if (index < 0 || index >= slots()) throw std::out_of_range("slot index out of range");
  return slots_[static_cast<std::size_t>(index)];
}

SlotEntry& SlotSocialState::mutable_slot(int index) {
  if (index < 0 || index >= slots()) throw std::out_of_range("slot index out of range");
  return slots_[static_cast<std::size_t>(index)];
}

void SlotSocialState::record_contact(NodeId peer, int slot) {
  if (peer == owner_) throw std::invalid_argument("record_contact: node cannot contact itself");
  SlotEntry& entry = mutable_slot(slot);
  const std::int64_t degree = ++entry.contacts[peer];
  entry.ego.set(owner_, peer, degree);
}

void SlotSocialState::merge_peer_contact_list(NodeId peer, const ContactList& peer_contacts,
                                              int slot) {
  SlotEntry& entry = mutable_slot(slot);
  for (const auto& [contact, degree] : peer_contacts) {
    entry.ego.set(contact, peer, degree);
  }
}

void SlotSocialState::update_contact_interest(const std::set<InterestId>& peer_self_interest,
                                              int slot) {
  SlotEntry& entry = mutable_slot(slot);
  for (InterestId interest : peer_self_interest) {
    bump(entry.contact_interest, interest, degrees_);
  }
}

void SlotSocialState::update_indirect_social(NodeId peer, const std::set<NodeId>& peer_direct,
                                             int slot) {
  SlotEntry& entry = mutable_slot(slot);
  for (NodeId friend_of_peer : peer_direct) {
    if (friend_of_peer == owner_ || friend_of_peer == peer) continue;
    if (direct_.contains(friend_of_peer)) continue;
    bump(entry.indirect, friend_of_peer, degrees_);
  }
}

void exchange_social_information(SlotSocialState& a, SlotSocialState& b, int slot) {
  a.record_contact(b.owner(), slot);
  b.record_contact(a.owner(), slot);

  // Snapshot both lists before merging so the exchange is order independent.
  const ContactList a_contacts = a.slot(slot).contacts;
  const ContactList b_contacts = b.slot(slot).contacts;
  a.merge_peer_contact_list(b.owner(), b_contacts, slot);
  b.merge_peer_contact_list(a.owner(), a_contacts, slot);

  a.update_contact_interest(b.self_interest(), slot);
  b.update_contact_interest(a.self_interest(), slot);
  a.update_indirect_social(b.owner(), b.direct(), slot);
  b.update_indirect_social(a.owner(), a.direct(), slot);
}

}  // namespace pis

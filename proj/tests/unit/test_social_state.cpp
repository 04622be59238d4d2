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

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "pis/social_state.hpp"
#include "test_util.hpp"

namespace pis {
namespace {

using testutil::I;
using testutil::N;

SlotSocialState make_state(std::uint32_t owner, std::set<InterestId> interests = {},
                           std::set<NodeId> friends = {}, DegreeUpdate degrees = {}) {
  return SlotSocialState(N(owner), 24, std::move(interests), std::move(friends), degrees);
}

TEST(EgoMatrixTest, SetIsSymmetricAndIgnoresDiagonal) {
  EgoMatrix ego;
  ego.set(N(1), N(2), 5);
  EXPECT_EQ(ego.get(N(1), N(2)), 5);
  EXPECT_EQ(ego.get(N(2), N(1)), 5);
  ego.set(N(3), N(3), 4);
  EXPECT_EQ(ego.get(N(3), N(3)), 0);
  ego.set(N(2), N(1), 0);
  EXPECT_TRUE(ego.empty());
}

TEST(RecordContactTest, FirstContactAndIncrement) {
  auto a = make_state(0);
  a.record_contact(N(1), 0);
  EXPECT_EQ(a.slot(0).contacts, (ContactList{{N(1), 1}}));
  a.record_contact(N(1), 0);
  a.record_contact(N(1), 0);
  a.record_contact(N(1), 0);
  EXPECT_EQ(a.slot(0).contacts.at(N(1)), 4);
  EXPECT_EQ(a.slot(0).ego.get(N(0), N(1)), 4);
}

TEST(RecordContactTest, CountsPerSlot) {
  auto a = make_state(0);
  a.record_contact(N(1), 2);
  a.record_contact(N(1), 2);
  a.record_contact(N(1), 5);
  EXPECT_EQ(a.slot(2).contacts.at(N(1)), 2);
  EXPECT_EQ(a.slot(5).contacts.at(N(1)), 1);
  EXPECT_TRUE(a.slot(3).contacts.empty());
}

TEST(RecordContactTest, RejectsSelf) {
  auto a = make_state(3);
  EXPECT_THROW(a.record_contact(N(3), 0), std::invalid_argument);
}

TEST(MergePeerContactListTest, OverwritesBothDirections) {
  auto a = make_state(0);
  a.merge_peer_contact_list(N(1), {{N(2), 5}}, 0);
  EXPECT_EQ(a.slot(0).ego.get(N(2), N(1)), 5);
  EXPECT_EQ(a.slot(0).ego.get(N(1), N(2)), 5);
  a.merge_peer_contact_list(N(1), {{N(2), 7}}, 0);
  EXPECT_EQ(a.slot(0).ego.get(N(2), N(1)), 7);
}

TEST(MergePeerContactListTest, EmptyListLeavesEgoUnchanged) {
  auto a = make_state(0);
  a.record_contact(N(1), 0);
  const auto before = a.slot(0).ego.rows();
  a.merge_peer_contact_list(N(4), {}, 0);
  EXPECT_EQ(a.slot(0).ego.rows(), before);
}

TEST(ContactInterestTest, InitialThenIncremental) {
  auto a = make_state(0, {}, {}, DegreeUpdate{2, 3});
  a.update_contact_interest({I(7)}, 1);
  EXPECT_EQ(a.slot(1).contact_interest.at(I(7)), 2);
  a.update_contact_interest({I(7)}, 1);
  EXPECT_EQ(a.slot(1).contact_interest.at(I(7)), 5);
  a.update_contact_interest({}, 1);
  EXPECT_EQ(a.slot(1).contact_interest.size(), 1u);
}

TEST(ContactInterestTest, NeverTouchesSelfInterest) {
  auto a = make_state(0, {I(1)});
  a.update_contact_interest({I(2), I(3)}, 0);
  EXPECT_EQ(a.self_interest(), (std::set<InterestId>{I(1)}));
}

TEST(IndirectSocialTest, AddsFriendsOfPeer) {
  auto a = make_state(0, {}, {N(5)});
  a.update_indirect_social(N(1), {N(0), N(5), N(9)}, 0);
  // Self and own direct friends are excluded.
  EXPECT_EQ(a.slot(0).indirect, (std::map<NodeId, std::int64_t>{{N(9), 1}}));
  a.update_indirect_social(N(1), {N(9)}, 0);
  EXPECT_EQ(a.slot(0).indirect.at(N(9)), 2);
}

TEST(IndirectSocialTest, DirectAndIndirectStayDisjoint) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint32_t> node(0, 9);
  std::set<NodeId> friends{N(2), N(4), N(6)};
  auto a = make_state(0, {}, friends);
  for (int k = 0; k < 300; ++k) {
    std::set<NodeId> peer_friends;
    for (int j = 0; j < 4; ++j) peer_friends.insert(N(node(rng)));
    a.update_indirect_social(N(node(rng) % 9 + 1), peer_friends, k % 24);
  }
  for (int s = 0; s < 24; ++s) {
    for (const auto& [f, d] : a.slot(s).indirect) {
      EXPECT_FALSE(friends.contains(f));
      EXPECT_NE(f, N(0));
      EXPECT_GE(d, 1);
    }
  }
}

TEST(SlotSocialStateTest, OwnerRemovedFromDirect) {
  auto a = make_state(4, {}, {N(4), N(1)});
  EXPECT_EQ(a.direct(), (std::set<NodeId>{N(1)}));
}

TEST(ExchangeTest, BothSidesLearn) {
  auto a = make_state(0, {I(1)}, {N(7)});
  auto b = make_state(1, {I(2)}, {N(8)});
  auto c = make_state(2);
  exchange_social_information(b, c, 3);
  exchange_social_information(a, b, 3);
  EXPECT_EQ(a.slot(3).contacts.at(N(1)), 1);
  EXPECT_EQ(b.slot(3).contacts.at(N(0)), 1);
  // a learns b's tie to c.
  EXPECT_EQ(a.slot(3).ego.get(N(2), N(1)), 1);
  EXPECT_EQ(a.slot(3).contact_interest.at(I(2)), 1);
  EXPECT_EQ(b.slot(3).contact_interest.at(I(1)), 1);
  EXPECT_EQ(a.slot(3).indirect.at(N(8)), 1);
  EXPECT_EQ(b.slot(3).indirect.at(N(7)), 1);
}

// Ego symmetry and monotone degrees under random interleavings.
TEST(ExchangeTest, RandomSequencesKeepInvariants) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> node(0, 6);
    std::uniform_int_distribution<int> slot(0, 3);
    std::vector<SlotSocialState> states;
    for (std::uint32_t n = 0; n < 7; ++n) states.emplace_back(N(n), 4, std::set<InterestId>{I(n % 3)}, std::set<NodeId>{N((n + 1) % 7)});
    std::map<std::tuple<std::uint32_t, int, std::uint32_t>, std::int64_t> expected_counts;
    std::vector<SlotSocialState> previous = states;
    for (int k = 0; k < 60; ++k) {
      const auto a = node(rng);
      auto b = node(rng);
      if (a == b) continue;
      const int s = slot(rng);
      exchange_social_information(states[a], states[b], s);
      ++expected_counts[{a, s, b}];
      ++expected_counts[{b, s, a}];
      for (std::uint32_t n = 0; n < 7; ++n) {
        for (int t = 0; t < 4; ++t) {
          const auto& entry = states[n].slot(t);
          for (const auto& [x, row] : entry.ego.rows()) {
            for (const auto& [y, v] : row) EXPECT_EQ(entry.ego.get(y, x), v);
          }
          for (const auto& [i, d] : previous[n].slot(t).contact_interest) EXPECT_GE(entry.contact_interest.at(i), d);
          for (const auto& [f, d] : previous[n].slot(t).indirect) EXPECT_GE(entry.indirect.at(f), d);
          for (const auto& [p, d] : previous[n].slot(t).contacts) EXPECT_GE(entry.contacts.at(p), d);
        }
      }
      previous = states;
    }
    // Contact list equals a recount of the encounters.
    for (const auto& [key, count] : expected_counts) {
      const auto& [owner, s, peer] = key;
      EXPECT_EQ(states[owner].slot(s).contacts.at(N(peer)), count);
    }
  }
}

}  // namespace
}  // namespace pis

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

#include <cmath>
#include <random>
#include <stdexcept>

#include "fake_view.hpp"
#include "oracle/betweenness_oracle.hpp"
#include "pis/router_baselines.hpp"
#include "test_util.hpp"

namespace pis {
namespace {

using testutil::FakeView;
using testutil::M;
using testutil::message;
using testutil::N;
using testutil::S;

// Epidemic

TEST(EpidemicTest, CopiesWhatThePeerLacks) {
  EpidemicRouter r;
  r.initialize(std::vector<Profile>(3));
  FakeView view;
  view.put(N(1), message(1, 1, 2));
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0], (TransferDirective{M(1), N(1), N(0), TransferMode::kCopy}));
}

TEST(EpidemicTest, NoDuplicatesAndEmptyBuffers) {
  EpidemicRouter r;
  r.initialize(std::vector<Profile>(3));
  FakeView empty;
  EXPECT_TRUE(r.plan_transfers(N(0), N(1), S(0), empty).empty());
  FakeView both;
  both.put(N(0), message(1, 0, 2));
  both.put(N(1), message(1, 0, 2));
  EXPECT_TRUE(r.plan_transfers(N(0), N(1), S(0), both).empty());
}

TEST(EpidemicTest, BothDirections) {
  EpidemicRouter r;
  r.initialize(std::vector<Profile>(4));
  FakeView view;
  view.put(N(0), message(1, 0, 3));
  view.put(N(1), message(2, 1, 3));
  EXPECT_EQ(r.plan_transfers(N(0), N(1), S(0), view).size(), 2u);
}

// PROPHET

TEST(ProphetTest, DirectEncounterUpdate) {
  ProphetRouter r;
  r.initialize(std::vector<Profile>(3));
  r.on_link_up(N(0), N(2), S(0));
  EXPECT_DOUBLE_EQ(r.predictability(N(0), N(2), S(0)), 0.75);
  EXPECT_DOUBLE_EQ(r.predictability(N(2), N(0), S(0)), 0.75);
  r.on_link_up(N(0), N(2), S(0));
  EXPECT_DOUBLE_EQ(r.predictability(N(0), N(2), S(0)), 0.75 + 0.25 * 0.75);
}

TEST(ProphetTest, AgingPerTimeUnit) {
  ProphetRouter r;
  r.initialize(std::vector<Profile>(3));
  r.on_link_up(N(0), N(2), S(0));
  EXPECT_NEAR(r.predictability(N(0), N(2), S(30)), 0.75 * 0.98, 1e-15);
  EXPECT_NEAR(r.predictability(N(0), N(2), S(300)), 0.75 * std::pow(0.98, 10), 1e-15);
}

TEST(ProphetTest, Transitivity) {
  ProphetRouter r;
  r.initialize(std::vector<Profile>(3));
  r.on_link_up(N(0), N(2), S(0));  // A meets D
  r.on_link_up(N(1), N(0), S(0));  // B meets A
  const double p_ad = 0.75;
  const double p_ba = 0.75;
  EXPECT_NEAR(r.predictability(N(1), N(2), S(0)), p_ba * p_ad * 0.25, 1e-15);
}

TEST(ProphetTest, ForwardsOnlyToHigherPredictability) {
  ProphetRouter r;
  r.initialize(std::vector<Profile>(3));
  FakeView view;
  view.put(N(1), message(1, 1, 2));
  // Nobody has met the destination: equal predictability, no transfer.
  EXPECT_TRUE(r.plan_transfers(N(0), N(1), S(0), view).empty());

  r.on_link_up(N(0), N(2), S(0));
  r.on_link_up(N(0), N(2), S(0));
  r.on_link_up(N(0), N(1), S(0));
  ASSERT_GT(r.predictability(N(0), N(2), S(0)), 0.9);
  ASSERT_LT(r.predictability(N(1), N(2), S(0)), 0.2);
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0], (TransferDirective{M(1), N(1), N(0), TransferMode::kCopy}));

  // The reverse direction stays put.
  FakeView reverse;
  reverse.put(N(0), message(2, 0, 2));
  EXPECT_TRUE(r.plan_transfers(N(0), N(1), S(0), reverse).empty());
}

TEST(ProphetTest, PredictabilitiesStayInUnitInterval) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> node(0, 7);
  std::uniform_real_distribution<double> step(0.0, 500.0);
  ProphetRouter r;
  r.initialize(std::vector<Profile>(8));
  double t = 0.0;
  for (int k = 0; k < 3000; ++k) {
    const auto a = node(rng);
    auto b = node(rng);
    if (a == b) continue;
    t += step(rng);
    r.on_link_up(N(a), N(b), S(t));
    for (std::uint32_t x = 0; x < 8; ++x) {
      for (std::uint32_t y = 0; y < 8; ++y) {
        const double p = r.predictability(N(x), N(y), S(t));
        ASSERT_GE(p, 0.0);
        ASSERT_LE(p, 1.0);
      }
    }
  }
}

TEST(ProphetTest, RejectsBadConfig) {
  EXPECT_THROW(ProphetRouter(ProphetConfig{.p_init = 0.0}), std::invalid_argument);
  EXPECT_THROW(ProphetRouter(ProphetConfig{.gamma = 1.5}), std::invalid_argument);
  EXPECT_THROW(ProphetRouter(ProphetConfig{.seconds_per_time_unit = 0.0}), std::invalid_argument);
}

// SimBet

std::vector<std::vector<int>> random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution edge(p);
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (std::size_t i = 1; i < n; ++i) adj[0][i] = adj[i][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) adj[i][j] = adj[j][i] = 1;
    }
  }
  return adj;
}

TEST(EgoBetweennessTest, MatchesShortestPathCounting) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const auto adj = random_graph(rng, n, 0.1 + 0.8 * (trial % 7) / 6.0);
    EXPECT_NEAR(ego_betweenness(adj), oracle::ego_betweenness_bfs(adj), 1e-12) << "trial " << trial;
  }
}

TEST(EgoBetweennessTest, Star) {
  // Centre with four unconnected leaves: every leaf pair routes via the centre.
  std::vector<std::vector<int>> star(5, std::vector<int>(5, 0));
  for (int i = 1; i < 5; ++i) star[0][i] = star[i][0] = 1;
  EXPECT_DOUBLE_EQ(ego_betweenness(star), 6.0);
  // A leaf's ego network is itself and the centre.
  const std::vector<std::vector<int>> leaf{{0, 1}, {1, 0}};
  EXPECT_DOUBLE_EQ(ego_betweenness(leaf), 0.0);

  SimBetRouter r;
  r.initialize(std::vector<Profile>(5));
  for (std::uint32_t i = 1; i < 5; ++i) r.add_contact(N(0), N(i));
  for (std::uint32_t i = 1; i < 5; ++i) EXPECT_GT(r.betweenness(N(0)), r.betweenness(N(i)));
}

TEST(SimBetTest, IdenticalEgoNetworksDoNotTransfer) {
  SimBetRouter r;
  r.initialize(std::vector<Profile>(4));
  r.add_contact(N(0), N(1));
  FakeView view;
  view.put(N(1), message(1, 1, 3));
  EXPECT_TRUE(r.plan_transfers(N(0), N(1), S(0), view).empty());
}

TEST(SimBetTest, DirectTieToDestinationWins) {
  // A=0 met D=2, B=1 met E=3, then A and B meet.
  SimBetRouter r;
  r.initialize(std::vector<Profile>(4));
  r.add_contact(N(0), N(2));
  r.add_contact(N(1), N(3));
  r.add_contact(N(0), N(1));
  ASSERT_DOUBLE_EQ(r.betweenness(N(0)), r.betweenness(N(1)));
  EXPECT_GT(r.similarity(N(0), N(2)), r.similarity(N(1), N(2)));
  FakeView view;
  view.put(N(1), message(1, 1, 2));
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0], (TransferDirective{M(1), N(1), N(0), TransferMode::kHandoff}));
}

TEST(SimBetTest, UtilitiesAreComplementary) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint32_t> node(0, 9);
  SimBetRouter r;
  r.initialize(std::vector<Profile>(10));
  for (int k = 0; k < 40; ++k) {
    const auto a = node(rng);
    const auto b = node(rng);
    if (a != b) r.add_contact(N(a), N(b));
  }
  for (std::uint32_t a = 0; a < 10; ++a) {
    for (std::uint32_t b = 0; b < 10; ++b) {
      for (std::uint32_t d = 0; d < 10; ++d) {
        const double ua = r.utility(N(a), N(b), N(d));
        const double ub = r.utility(N(b), N(a), N(d));
        EXPECT_GE(ua, 0.0);
        EXPECT_LE(ua, 1.0);
        // Shares sum to one per dimension unless both sides are zero.
        EXPECT_LE(ua + ub, 1.0 + 1e-12);
      }
    }
  }
}

TEST(SimBetTest, DeliversToDestination) {
  SimBetRouter r;
  r.initialize(std::vector<Profile>(3));
  FakeView view;
  view.put(N(0), message(1, 0, 1));
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].mode, TransferMode::kHandoff);
}

// Spray-and-wait

TEST(SprayAndWaitTest, SplitsThenWaits) {
  SprayAndWaitRouter r;
  EXPECT_EQ(r.initial_copies(), 8);
  FakeView view;
  view.put(N(0), message(1, 0, 5, 8));
  view.put(N(0), message(2, 0, 5, 1));
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0], (TransferDirective{M(1), N(0), N(1), TransferMode::kSplit}));
}

TEST(SprayAndWaitTest, LastCopyGoesOnlyToDestination) {
  SprayAndWaitRouter r;
  FakeView view;
  view.put(N(0), message(2, 0, 1, 1));
  const auto plan = r.plan_transfers(N(0), N(1), S(0), view);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].mode, TransferMode::kHandoff);
  EXPECT_THROW(SprayAndWaitRouter(SprayAndWaitConfig{0}), std::invalid_argument);
}

}  // namespace
}  // namespace pis

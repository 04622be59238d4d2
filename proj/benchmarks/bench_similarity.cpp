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

#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "pis/similarity.hpp"
#include "pis/social_state.hpp"

namespace {

// A node that has met every other node a few times in every slot.
struct Populated {
  std::vector<pis::SlotSocialState> states;
  pis::Profile dst_profile;
};

Populated populate(std::uint32_t nodes) {
  Populated p;
  const pis::DegreeUpdate degrees{1, 1};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> topic(0, 19);
  for (std::uint32_t n = 0; n < nodes; ++n) {
    std::set<pis::InterestId> interests{pis::InterestId{topic(rng)}, pis::InterestId{topic(rng)}};
    std::set<pis::NodeId> friends{pis::NodeId{(n + 1) % nodes}, pis::NodeId{(n + 7) % nodes}};
    friends.erase(pis::NodeId{n});
    p.states.emplace_back(pis::NodeId{n}, 24, interests, friends, degrees);
  }
  std::uniform_int_distribution<std::uint32_t> node(0, nodes - 1);
  std::uniform_int_distribution<int> slot(0, 23);
  for (int k = 0; k < 20 * static_cast<int>(nodes); ++k) {
    const auto a = node(rng);
    const auto b = node(rng);
    if (a != b) pis::exchange_social_information(p.states[a], p.states[b], slot(rng));
  }
  p.dst_profile.interests = {pis::InterestId{1}, pis::InterestId{4}};
  p.dst_profile.friends = {pis::NodeId{2}, pis::NodeId{5}};
  return p;
}

void BM_SimilarityToward(benchmark::State& state) {
  const auto nodes = static_cast<std::uint32_t>(state.range(0));
  const Populated p = populate(nodes);
  const pis::SlotClock clock;
  const pis::SimilarityParams params;
  std::uint32_t dst = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pis::similarity_toward(p.states[0], pis::NodeId{dst}, p.dst_profile, clock, 7200.0, params));
    dst = dst % (nodes - 1) + 1;
  }
}
BENCHMARK(BM_SimilarityToward)->Arg(20)->Arg(76)->Arg(200);

void BM_ExchangeSocialInformation(benchmark::State& state) {
  Populated p = populate(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    pis::exchange_social_information(p.states[0], p.states[1], 5);
  }
}
BENCHMARK(BM_ExchangeSocialInformation)->Arg(20)->Arg(76)->Arg(200);

}  // namespace

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

#include "pis/router_pis.hpp"

#include <stdexcept>

namespace pis {

void PisConfig::validate() const {
  params.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (initial_nof_copy < 1) throw std::invalid_argument("initial copy count must be >= 1");
  if (params.lookback > clock.slots_per_cycle()) {
    throw std::invalid_argument("lookback cannot exceed the slots per cycle");
  }
}

std::pair<int, int> split_copies(int n) {
  if (n < 2) throw std::invalid_argument("split_copies: need at least two copies");
  const int given = n / 2;
  return {n - given, given};
}

Message attach_similarity(Message m, const SimilarityTriple& triple) {
  m.attached_sim = triple;
  return m;
}

PisRouter::PisRouter(PisConfig config) : config_(std::move(config)) { config_.validate(); }

void PisRouter::initialize(std::span<const Profile> profiles) {
  profiles_.assign(profiles.begin(), profiles.end());
  states_.clear();
  states_.reserve(profiles_.size());
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    states_.emplace_back(NodeId{static_cast<std::uint32_t>(i)}, config_.clock.slots_per_cycle(),
                         profiles_[i].interests, profiles_[i].friends, config_.degrees);
  }
}

void PisRouter::on_link_up(NodeId a, NodeId b, SimTime now) {
  const int slot = config_.clock.slot_of(to_seconds(now));
  exchange_social_information(states_.at(to_index(a)), states_.at(to_index(b)), slot);
}

SimilarityTriple PisRouter::triple_toward(NodeId node, NodeId dst, SimTime now) const {
  return similarity_toward(states_.at(to_index(node)), dst, profiles_.at(to_index(dst)),
                           config_.clock, to_seconds(now), config_.params);
}

std::optional<TransferMode> PisRouter::decide(int nof_copy, const SimilarityTriple& candidate,
                                              const SimilarityTriple& holder) const {
  const double utility = sim_pis(candidate, holder, config_.params);
  if (nof_copy > 1) {
    if (utility + config_.gamma > 0.0) return TransferMode::kSplit;
  } else if (nof_copy == 1) {
    if (utility > 0.0) return TransferMode::kHandoff;
  }
  return std::nullopt;
}

void PisRouter::plan_direction(NodeId holder, NodeId candidate, SimTime now,
                               const NetworkView& view, std::vector<TransferDirective>& out) const {
  for (const BufferedMessage& entry : view.buffer(holder)) {
    const Message& m = entry.message;
    if (m.dst == candidate) {
      out.push_back({m.id, holder, candidate, TransferMode::kHandoff});
      continue;
    }
    if (view.holds(candidate, m.id)) continue;
    const SimilarityTriple candidate_sim = triple_toward(candidate, m.dst, now);
    const SimilarityTriple holder_sim = (config_.fresh_peer_sim || !m.attached_sim)
                                            ? triple_toward(holder, m.dst, now)
                                            : *m.attached_sim;
    if (auto mode = decide(m.nof_copy, candidate_sim, holder_sim)) {
      out.push_back({m.id, holder, candidate, *mode});
    }
  }
}

std::vector<TransferDirective> PisRouter::plan_transfers(NodeId a, NodeId b, SimTime now,
                                                         const NetworkView& view) {
  std::vector<TransferDirective> out;
  plan_direction(b, a, now, view, out);
  plan_direction(a, b, now, view, out);
  return out;
}

void PisRouter::on_message_received(NodeId carrier, Message& replica, SimTime now) {
  const SimilarityTriple triple = triple_toward(carrier, replica.dst, now);
  replica = attach_similarity(std::move(replica), triple);
}

}  // namespace pis

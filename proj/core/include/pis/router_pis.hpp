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

#ifndef PIS_ROUTER_PIS_HPP_
#define PIS_ROUTER_PIS_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "pis/router.hpp"
#include "pis/similarity.hpp"
#include "pis/social_state.hpp"

namespace pis {

struct PisConfig {
  SimilarityParams params;
  // Range control: a multi-copy replica moves when simPIS + gamma > 0.
  double gamma = 0.8;
  int initial_nof_copy = 8;
  // Recompute the holder's triple at decision time instead of reading the
  // one attached when it received the message.
  bool fresh_peer_sim = false;
  DegreeUpdate degrees;
  SlotClock clock;

  void validate() const;
};

// n -> (kept, given) with given = floor(n / 2). Requires n >= 2.
std::pair<int, int> split_copies(int n);

// Stamps `triple` as the carrier's similarity toward m.dst.
Message attach_similarity(Message m, const SimilarityTriple& triple);

// Multi-dimensional social router: proximity, interests and social ties per
// slot of the day, combined into a signed utility, with binary copy control.
class PisRouter final : public Router {
 public:
  explicit PisRouter(PisConfig config);

  std::string name() const override { return "pis"; }
  void initialize(std::span<const Profile> profiles) override;
  int initial_copies() const override { return config_.initial_nof_copy; }
  bool conserves_copies() const override { return true; }
  void on_link_up(NodeId a, NodeId b, SimTime now) override;
  std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                const NetworkView& view) override;
  void on_message_received(NodeId carrier, Message& replica, SimTime now) override;

  // Forwarding rule for one replica held by `holder` when `candidate` is met.
  // Pure function of the two triples and the copy count.
  std::optional<TransferMode> decide(int nof_copy, const SimilarityTriple& candidate,
                                     const SimilarityTriple& holder) const;

  SimilarityTriple triple_toward(NodeId node, NodeId dst, SimTime now) const;
  const SlotSocialState& state(NodeId node) const { return states_.at(to_index(node)); }
  const PisConfig& config() const { return config_; }

 private:
  void plan_direction(NodeId holder, NodeId candidate, SimTime now, const NetworkView& view,
                      std::vector<TransferDirective>& out) const;

  PisConfig config_;
  std::vector<Profile> profiles_;
  std::vector<SlotSocialState> states_;
};

}  // namespace pis

#endif  // PIS_ROUTER_PIS_HPP_

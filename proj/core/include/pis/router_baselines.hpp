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

#ifndef PIS_ROUTER_BASELINES_HPP_
#define PIS_ROUTER_BASELINES_HPP_

#include <map>
#include <set>
#include <vector>

#include "pis/router.hpp"

namespace pis {

// Flooding: every message one side holds and the other lacks is copied.
class EpidemicRouter final : public Router {
 public:
  std::string name() const override { return "epidemic"; }
  void initialize(std::span<const Profile> profiles) override;
  void on_link_up(NodeId, NodeId, SimTime) override {}
  std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                const NetworkView& view) override;
};

struct ProphetConfig {
  double p_init = 0.75;
  double beta = 0.25;   // transitivity scaling
  double gamma = 0.98;  // aging base per time unit
  double seconds_per_time_unit = 30.0;
};

// Delivery-predictability routing. Copies a message to the peer when the
// peer's predictability for the destination is strictly higher.
class ProphetRouter final : public Router {
 public:
  explicit ProphetRouter(ProphetConfig config = {});

  std::string name() const override { return "prophet"; }
  void initialize(std::span<const Profile> profiles) override;
  void on_link_up(NodeId a, NodeId b, SimTime now) override;
  std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                const NetworkView& view) override;

  // P(node, dst) after aging to `now`.
  double predictability(NodeId node, NodeId dst, SimTime now) const;

 private:
  struct NodeState {
    std::map<NodeId, double> p;
    SimTime last_aged{};
  };
  void age(NodeState& s, SimTime now) const;

  ProphetConfig config_;
  std::vector<NodeState> nodes_;
};

struct SimBetConfig {
  // Weight of the similarity utility; betweenness gets 1 - alpha.
  double alpha = 0.5;
};

// Ego betweenness of the ego (index 0) over a symmetric 0/1 adjacency matrix
// of the ego network: sum over non-adjacent alter pairs of 1 / (#two-step
// paths between them).
double ego_betweenness(const std::vector<std::vector<int>>& adjacency);

// Single-copy forwarding on betweenness and common-neighbour similarity over
// binary ego networks.
class SimBetRouter final : public Router {
 public:
  explicit SimBetRouter(SimBetConfig config = {});

  std::string name() const override { return "simbet"; }
  void initialize(std::span<const Profile> profiles) override;
  bool conserves_copies() const override { return true; }
  void on_link_up(NodeId a, NodeId b, SimTime now) override;
  std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                const NetworkView& view) override;

  double betweenness(NodeId node) const;
  // Members shared by the closed neighbourhoods N[node] and N[dst], as far as `node`
  // knows them: its contacts known to have met dst, plus two when node and
  // dst have met each other.
  double similarity(NodeId node, NodeId dst) const;
  // Combined utility of `node` relative to `other` for destination dst.
  double utility(NodeId node, NodeId other, NodeId dst) const;

  // Test hook: install a contact directly on both sides and exchange lists.
  void add_contact(NodeId a, NodeId b) { on_link_up(a, b, SimTime{0}); }

 private:
  struct NodeState {
    std::set<NodeId> contacts;
    std::map<NodeId, std::set<NodeId>> alter_contacts;  // contact lists learned from alters
  };
  bool alters_adjacent(const NodeState& s, NodeId x, NodeId y) const;

  SimBetConfig config_;
  std::vector<NodeState> nodes_;
};

struct SprayAndWaitConfig {
  int copies = 8;
};

// Binary spray-and-wait: halve the budget on every encounter while more
// than one copy remains, then wait for the destination.
class SprayAndWaitRouter final : public Router {
 public:
  explicit SprayAndWaitRouter(SprayAndWaitConfig config = {});

  std::string name() const override { return "snw"; }
  void initialize(std::span<const Profile>) override {}
  int initial_copies() const override { return config_.copies; }
  bool conserves_copies() const override { return true; }
  void on_link_up(NodeId, NodeId, SimTime) override {}
  std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                const NetworkView& view) override;

 private:
  SprayAndWaitConfig config_;
};

}  // namespace pis

#endif  // PIS_ROUTER_BASELINES_HPP_

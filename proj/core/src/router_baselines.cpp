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

#include "pis/router_baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace pis {

namespace {

// Directives for messages `holder` carries that are addressed to `peer`.
bool add_delivery(const Message& m, NodeId holder, NodeId peer, TransferMode mode,
                  std::vector<TransferDirective>& out) {
  if (m.dst != peer) return false;
  out.push_back({m.id, holder, peer, mode});
  return true;
}

}  // namespace

// Epidemic

void EpidemicRouter::initialize(std::span<const Profile>) {}

std::vector<TransferDirective> EpidemicRouter::plan_transfers(NodeId a, NodeId b, SimTime,
                                                              const NetworkView& view) {
  std::vector<TransferDirective> out;
  for (auto [holder, peer] : {std::pair{b, a}, std::pair{a, b}}) {
    for (const BufferedMessage& e : view.buffer(holder)) {
      if (add_delivery(e.message, holder, peer, TransferMode::kCopy, out)) continue;
      if (!view.holds(peer, e.message.id)) out.push_back({e.message.id, holder, peer, TransferMode::kCopy});
    }
  }
  return out;
}

// PROPHET

ProphetRouter::ProphetRouter(ProphetConfig config) : config_(config) {
  if (!(config_.p_init > 0.0 && config_.p_init <= 1.0)) throw std::invalid_argument("p_init must be in (0, 1]");
  if (!(config_.beta >= 0.0 && config_.beta <= 1.0)) throw std::invalid_argument("beta must be in [0, 1]");
  if (!(config_.gamma > 0.0 && config_.gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
  if (!(config_.seconds_per_time_unit > 0.0)) throw std::invalid_argument("time unit must be positive");
}

void ProphetRouter::initialize(std::span<const Profile> profiles) {
  nodes_.assign(profiles.size(), NodeState{});
}

void ProphetRouter::age(NodeState& s, SimTime now) const {
  if (now <= s.last_aged) return;
  const double units = to_seconds(now - s.last_aged) / config_.seconds_per_time_unit;
  const double factor = std::pow(config_.gamma, units);
  for (auto& [dst, p] : s.p) p *= factor;
  s.last_aged = now;
}

double ProphetRouter::predictability(NodeId node, NodeId dst, SimTime now) const {
  const NodeState& s = nodes_.at(to_index(node));
  auto it = s.p.find(dst);
  if (it == s.p.end()) return 0.0;
  if (now <= s.last_aged) return it->second;
  const double units = to_seconds(now - s.last_aged) / config_.seconds_per_time_unit;
  return it->second * std::pow(config_.gamma, units);
}

void ProphetRouter::on_link_up(NodeId a, NodeId b, SimTime now) {
  NodeState& sa = nodes_.at(to_index(a));
  NodeState& sb = nodes_.at(to_index(b));
  age(sa, now);
  age(sb, now);

  double& pab = sa.p[b];
  pab += (1.0 - pab) * config_.p_init;
  double& pba = sb.p[a];
  pba += (1.0 - pba) * config_.p_init;

  // Transitivity uses each side's table as it stood before the other's
  // transitive update.
  const std::map<NodeId, double> table_a = sa.p;
  const std::map<NodeId, double> table_b = sb.p;
  auto transit = [&](NodeState& self, NodeId self_id, NodeId peer, const std::map<NodeId, double>& peer_table) {
    const double p_peer = self.p[peer];
    for (const auto& [c, p_peer_c] : peer_table) {
      if (c == self_id || c == peer) continue;
      double& p = self.p[c];
      p += (1.0 - p) * p_peer * p_peer_c * config_.beta;
    }
  };
  transit(sa, a, b, table_b);
  transit(sb, b, a, table_a);
}

std::vector<TransferDirective> ProphetRouter::plan_transfers(NodeId a, NodeId b, SimTime now,
                                                             const NetworkView& view) {
  std::vector<TransferDirective> out;
  for (auto [holder, peer] : {std::pair{b, a}, std::pair{a, b}}) {
    for (const BufferedMessage& e : view.buffer(holder)) {
      const Message& m = e.message;
      if (add_delivery(m, holder, peer, TransferMode::kCopy, out)) continue;
      if (view.holds(peer, m.id)) continue;
      if (predictability(peer, m.dst, now) > predictability(holder, m.dst, now)) {
        out.push_back({m.id, holder, peer, TransferMode::kCopy});
      }
    }
  }
  return out;
}

// SimBet

double ego_betweenness(const std::vector<std::vector<int>>& adjacency) {
  const std::size_t n = adjacency.size();
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency[i][j] != 0) continue;
      int two_step = 0;
      for (std::size_t k = 0; k < n; ++k) two_step += adjacency[i][k] * adjacency[k][j];
      if (two_step > 0) total += 1.0 / two_step;
    }
  }
  return total;
}

SimBetRouter::SimBetRouter(SimBetConfig config) : config_(config) {
  if (!(config_.alpha >= 0.0 && config_.alpha <= 1.0)) throw std::invalid_argument("simbet alpha must be in [0, 1]");
}

void SimBetRouter::initialize(std::span<const Profile> profiles) {
  nodes_.assign(profiles.size(), NodeState{});
}

void SimBetRouter::on_link_up(NodeId a, NodeId b, SimTime) {
  if (std::max(to_index(a), to_index(b)) >= nodes_.size()) {
    nodes_.resize(std::max(to_index(a), to_index(b)) + 1u);
  }
  NodeState& sa = nodes_[to_index(a)];
  NodeState& sb = nodes_[to_index(b)];
  sa.contacts.insert(b);
  sb.contacts.insert(a);
  sa.alter_contacts[b] = sb.contacts;
  sb.alter_contacts[a] = sa.contacts;
}

bool SimBetRouter::alters_adjacent(const NodeState& s, NodeId x, NodeId y) const {
  if (auto it = s.alter_contacts.find(x); it != s.alter_contacts.end() && it->second.contains(y)) {
    return true;
  }
  if (auto it = s.alter_contacts.find(y); it != s.alter_contacts.end() && it->second.contains(x)) {
    return true;
  }
  return false;
}

double SimBetRouter::betweenness(NodeId node) const {
  if (to_index(node) >= nodes_.size()) return 0.0;
  const NodeState& s = nodes_[to_index(node)];
  const std::vector<NodeId> alters(s.contacts.begin(), s.contacts.end());
  const std::size_t n = alters.size() + 1;
  std::vector<std::vector<int>> adjacency(n, std::vector<int>(n, 0));
  for (std::size_t i = 1; i < n; ++i) {
    adjacency[0][i] = adjacency[i][0] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (alters_adjacent(s, alters[i - 1], alters[j - 1])) adjacency[i][j] = adjacency[j][i] = 1;
    }
  }
  return ego_betweenness(adjacency);
}

double SimBetRouter::similarity(NodeId node, NodeId dst) const {
  if (to_index(node) >= nodes_.size()) return 0.0;
  const NodeState& s = nodes_[to_index(node)];
  // Common members of the closed neighbourhoods N[node] and N[dst]. A direct
  // tie puts node in N[dst] and dst in N[node].
  double common = s.contacts.contains(dst) ? 2.0 : 0.0;
  for (NodeId x : s.contacts) {
    if (x == dst) continue;
    if (alters_adjacent(s, x, dst)) common += 1.0;
  }
  return common;
}

double SimBetRouter::utility(NodeId node, NodeId other, NodeId dst) const {
  auto share = [](double mine, double theirs) {
    const double total = mine + theirs;
    return total == 0.0 ? 0.0 : mine / total;
  };
  const double sim_util = share(similarity(node, dst), similarity(other, dst));
  const double bet_util = share(betweenness(node), betweenness(other));
  return config_.alpha * sim_util + (1.0 - config_.alpha) * bet_util;
}

std::vector<TransferDirective> SimBetRouter::plan_transfers(NodeId a, NodeId b, SimTime,
                                                            const NetworkView& view) {
  std::vector<TransferDirective> out;
  for (auto [holder, peer] : {std::pair{b, a}, std::pair{a, b}}) {
    for (const BufferedMessage& e : view.buffer(holder)) {
      const Message& m = e.message;
      if (add_delivery(m, holder, peer, TransferMode::kHandoff, out)) continue;
      if (view.holds(peer, m.id)) continue;
      if (utility(peer, holder, m.dst) > utility(holder, peer, m.dst)) {
        out.push_back({m.id, holder, peer, TransferMode::kHandoff});
      }
    }
  }
  return out;
}

// Spray and wait

SprayAndWaitRouter::SprayAndWaitRouter(SprayAndWaitConfig config) : config_(config) {
  if (config_.copies < 1) throw std::invalid_argument("spray-and-wait copies must be >= 1");
}

std::vector<TransferDirective> SprayAndWaitRouter::plan_transfers(NodeId a, NodeId b, SimTime,
                                                                  const NetworkView& view) {
  std::vector<TransferDirective> out;
  for (auto [holder, peer] : {std::pair{b, a}, std::pair{a, b}}) {
    for (const BufferedMessage& e : view.buffer(holder)) {
      const Message& m = e.message;
      if (add_delivery(m, holder, peer, TransferMode::kHandoff, out)) continue;
      if (m.nof_copy > 1 && !view.holds(peer, m.id)) {
        out.push_back({m.id, holder, peer, TransferMode::kSplit});
      }
    }
  }
  return out;
}

}  // namespace pis

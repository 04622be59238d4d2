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

#include "pis/similarity.hpp"

#include <cmath>
#include <stdexcept>

namespace pis {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

// Walks the lookback window starting at the slot of `now_s` and accumulates
// weight * per_slot(slot_entry).
template <typename PerSlot>
double windowed_sum(const SlotSocialState& state, const SlotClock& clock, double now_s,
                    const SimilarityParams& params, PerSlot per_slot) {
  const std::vector<double> weights = slot_weights(params);
  const std::vector<int> window =
      clock.lookback_slots(clock.slot_of(now_s), params.lookback);
  double total = 0.0;
  for (std::size_t k = 0; k < window.size(); ++k) {
    total += per_slot(state.slot(window[k])) * weights[k];
  }
  return total;
}

template <typename T>
std::size_t intersection_size(const std::set<T>& x, const std::set<T>& y) {
  std::size_t count = 0;
  auto xi = x.begin();
  auto yi = y.begin();
  while (xi != x.end() && yi != y.end()) {
    if (*xi < *yi) {
      ++xi;
    } else if (*yi < *xi) {
      ++yi;
    } else {
      ++count;
      ++xi;
      ++yi;
    }
  }
  return count;
}

}  // namespace

void SimilarityParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in (0, 1)");
  if (lookback < 1) throw std::invalid_argument("lookback must be >= 1");
  if (rho < 0.0 || sigma < 0.0 || tau < 0.0) {
    throw std::invalid_argument("rho, sigma and tau must be non-negative");
  }
  if (std::abs(rho + sigma + tau - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("rho + sigma + tau must equal 1");
  }
}

std::vector<double> slot_weights(const SimilarityParams& params) {
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(params.lookback));
  double w = params.beta;
  for (int k = 0; k < params.lookback; ++k) {
    weights.push_back(w);
    w = params.squared_weighting ? w * w : w * params.beta;
  }
  return weights;
}

double sim_pro_slot(const EgoMatrix& ego, NodeId dst, NodeId self, bool credit_direct_tie) {
  const auto& self_row = ego.row(self);
  const auto& dst_row = ego.row(dst);
  double sum = 0.0;
  // Both rows are ordered by node id; merge-walk for the common neighbours.
  auto si = self_row.begin();
  auto di = dst_row.begin();
  while (si != self_row.end() && di != dst_row.end()) {
    if (si->first < di->first) {
      ++si;
    } else if (di->first < si->first) {
      ++di;
    } else {
      const NodeId common = si->first;
      if (common != self && common != dst) sum += static_cast<double>(di->second);
      ++si;
      ++di;
    }
  }
  if (credit_direct_tie) sum += static_cast<double>(ego.get(self, dst));
  return sum;
}

double sim_pro(const SlotSocialState& state, NodeId dst, const SlotClock& clock, double now_s,
               const SimilarityParams& params) {
  return windowed_sum(state, clock, now_s, params, [&](const SlotEntry& entry) {
    return sim_pro_slot(entry.ego, dst, state.owner(), params.credit_direct_tie);
  });
}

double sim_ins(const SlotSocialState& state, const std::set<InterestId>& dst_interests,
               const SlotClock& clock, double now_s, const SimilarityParams& params) {
  const double common_self =
      static_cast<double>(intersection_size(state.self_interest(), dst_interests));
  const double self_part = windowed_sum(state, clock, now_s, params,
                                        [&](const SlotEntry&) { return common_self; });
  const double contact_part =
      windowed_sum(state, clock, now_s, params, [&](const SlotEntry& entry) {
        double degree_sum = 0.0;
        for (InterestId interest : dst_interests) {
          if (auto it = entry.contact_interest.find(interest);
              it != entry.contact_interest.end()) {
            degree_sum += static_cast<double>(it->second);
          }
        }
        return degree_sum;
      });
  return params.alpha * self_part + (1.0 - params.alpha) * contact_part;
}

double sim_soc(const SlotSocialState& state, NodeId dst, const std::set<NodeId>& dst_direct,
               const SlotClock& clock, double now_s, const SimilarityParams& params) {
  // Being a direct friend of the destination counts as one shared membership.
  double common_direct = static_cast<double>(intersection_size(state.direct(), dst_direct));
  if (state.direct().contains(dst)) common_direct += 1.0;
  const double direct_part = windowed_sum(state, clock, now_s, params,
                                          [&](const SlotEntry&) { return common_direct; });
  const double indirect_part =
      windowed_sum(state, clock, now_s, params, [&](const SlotEntry& entry) {
        double degree_sum = 0.0;
        for (NodeId f : dst_direct) {
          if (auto it = entry.indirect.find(f); it != entry.indirect.end()) {
            degree_sum += static_cast<double>(it->second);
          }
        }
        return degree_sum;
      });
  return params.alpha * direct_part + (1.0 - params.alpha) * indirect_part;
}

SimilarityTriple similarity_toward(const SlotSocialState& state, NodeId dst,
                                   const Profile& dst_profile, const SlotClock& clock,
                                   double now_s, const SimilarityParams& params) {
  return {
      .pro = sim_pro(state, dst, clock, now_s, params),
      .ins = sim_ins(state, dst_profile.interests, clock, now_s, params),
      .soc = sim_soc(state, dst, dst_profile.friends, clock, now_s, params),
  };
}

double sim_dev(double a, double b) {
  const double total = a + b;
  if (total == 0.0) return 0.0;
  return (a - b) / total;
}

double sim_pis(double dev_pro, double dev_ins, double dev_soc, const SimilarityParams& params) {
  if (std::abs(params.rho + params.sigma + params.tau - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("rho + sigma + tau must equal 1");
  }
  return params.rho * dev_pro + params.sigma * dev_ins + params.tau * dev_soc;
}

double sim_pis(const SimilarityTriple& candidate, const SimilarityTriple& holder,
               const SimilarityParams& params) {
  return sim_pis(sim_dev(candidate.pro, holder.pro), sim_dev(candidate.ins, holder.ins),
                 sim_dev(candidate.soc, holder.soc), params);
}

}  // namespace pis

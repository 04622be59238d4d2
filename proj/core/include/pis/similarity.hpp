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

#ifndef PIS_SIMILARITY_HPP_
#define PIS_SIMILARITY_HPP_

#include <set>
#include <vector>

#include "pis/model.hpp"
#include "pis/social_state.hpp"

namespace pis {

/// Weights of the similarity measurement and of the forwarding utility.
///
/// `alpha` blends the static part (self interests, direct friends) against the
/// learned part (contact interests, indirect friends). `beta` discounts the
/// slots of the lookback window: slot k of the window weighs beta^(k+1).
/// `rho`, `sigma` and `tau` weigh the proximity, interest and social
/// deviations and must sum to one.
struct SimilarityParams {
  double alpha = 0.5;
  double beta = 0.8;
  int lookback = 6;
  double rho = 1.0 / 3.0;
  double sigma = 1.0 / 3.0;
  double tau = 1.0 / 3.0;
  // Weights beta, beta^2, beta^4, ... (repeated squaring) instead of beta^(k+1).
  bool squared_weighting = false;
  // Adds the carrier's own tie Ego[self][dst] to the common-neighbour sum.
  bool credit_direct_tie = false;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// Per-slot weights of the lookback window, index k = distance from the
// current slot.
std::vector<double> slot_weights(const SimilarityParams& params);

// Sum of Ego[C][dst] over the nodes C adjacent to both `self` and `dst`.
double sim_pro_slot(const EgoMatrix& ego, NodeId dst, NodeId self,
                    bool credit_direct_tie = false);

double sim_pro(const SlotSocialState& state, NodeId dst, const SlotClock& clock,
               double now_s, const SimilarityParams& params);

double sim_ins(const SlotSocialState& state, const std::set<InterestId>& dst_interests,
               const SlotClock& clock, double now_s, const SimilarityParams& params);

double sim_soc(const SlotSocialState& state, NodeId dst, const std::set<NodeId>& dst_direct,
               const SlotClock& clock, double now_s, const SimilarityParams& params);

// All three dimensions of `state`'s owner toward `dst`.
SimilarityTriple similarity_toward(const SlotSocialState& state, NodeId dst,
                                   const Profile& dst_profile, const SlotClock& clock,
                                   double now_s, const SimilarityParams& params);

// (a - b) / (a + b), defined as 0 when both are 0.
double sim_dev(double a, double b);

// rho * dev_pro + sigma * dev_ins + tau * dev_soc.
double sim_pis(double dev_pro, double dev_ins, double dev_soc, const SimilarityParams& params);

// Utility of `candidate` over `holder`; positive favours the candidate.
double sim_pis(const SimilarityTriple& candidate, const SimilarityTriple& holder,
               const SimilarityParams& params);

}  // namespace pis

#endif  // PIS_SIMILARITY_HPP_

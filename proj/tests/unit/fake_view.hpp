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

#ifndef PIS_TESTS_UNIT_FAKE_VIEW_HPP_
#define PIS_TESTS_UNIT_FAKE_VIEW_HPP_

#include <map>
#include <vector>

#include "pis/router.hpp"

namespace testutil {

// Buffers keyed by node, for driving routers without the engine.
class FakeView : public pis::NetworkView {
 public:
  void put(pis::NodeId node, pis::Message m) { buffers_[node].push_back({std::move(m), pis::SimTime{0}}); }

  std::span<const pis::BufferedMessage> buffer(pis::NodeId node) const override {
    auto it = buffers_.find(node);
    if (it == buffers_.end()) return {};
    return it->second;
  }
  bool holds(pis::NodeId node, pis::MessageId id) const override {
    for (const auto& e : buffer(node)) {
      if (e.message.id == id) return true;
    }
    return false;
  }

 private:
  std::map<pis::NodeId, std::vector<pis::BufferedMessage>> buffers_;
};

inline pis::Message message(std::uint64_t id, std::uint32_t src, std::uint32_t dst, int nof_copy = 1) {
  pis::Message m;
  m.id = pis::MessageId{id};
  m.src = pis::NodeId{src};
  m.dst = pis::NodeId{dst};
  m.size = 1000;
  m.ttl = pis::from_seconds(36000.0);
  m.nof_copy = nof_copy;
  return m;
}

}  // namespace testutil

#endif  // PIS_TESTS_UNIT_FAKE_VIEW_HPP_

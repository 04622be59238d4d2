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

#ifndef PIS_ROUTER_HPP_
#define PIS_ROUTER_HPP_

#include <span>
#include <string>
#include <vector>

#include "pis/model.hpp"

namespace pis {

enum class TransferMode : std::uint8_t {
  kCopy,     // receiver gets a replica, sender keeps its own
  kSplit,    // receiver gets floor(n/2) copies, sender keeps the rest
  kHandoff,  // receiver gets the whole replica, sender deletes it
};

struct TransferDirective {
  MessageId message{};
  NodeId from{};
  NodeId to{};
  TransferMode mode = TransferMode::kCopy;

  friend bool operator==(const TransferDirective&, const TransferDirective&) = default;
};

struct BufferedMessage {
  Message message;
  SimTime received_at{};
};

// Read-only window onto node buffers that the engine hands to routers.
class NetworkView {
 public:
  virtual ~NetworkView() = default;
  virtual std::span<const BufferedMessage> buffer(NodeId node) const = 0;
  virtual bool holds(NodeId node, MessageId id) const = 0;
};

class Router {
 public:
  virtual ~Router() = default;

  virtual std::string name() const = 0;

  // Called once before the first event. `profiles` has one entry per node.
  virtual void initialize(std::span<const Profile> profiles) = 0;

  // Copy budget of a freshly generated message.
  virtual int initial_copies() const { return 1; }

  // True when the router never duplicates copy budget, so the engine can
  // audit that live copies plus consumed copies equal the initial budget.
  virtual bool conserves_copies() const { return false; }

  // State exchange at link-up (contact lists, predictabilities, ...).
  virtual void on_link_up(NodeId a, NodeId b, SimTime now) = 0;

  // Forwarding decisions for both directions of the a-b link.
  virtual std::vector<TransferDirective> plan_transfers(NodeId a, NodeId b, SimTime now,
                                                        const NetworkView& view) = 0;

  // A transferred replica was just stored at `carrier`.
  virtual void on_message_received(NodeId /*carrier*/, Message& /*replica*/, SimTime /*now*/) {}
};

}  // namespace pis

#endif  // PIS_ROUTER_HPP_

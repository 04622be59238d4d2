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

#include "pis/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pis {

SimTime from_seconds(double seconds) {
  return SimTime{std::llround(seconds * 1e6)};
}

SlotClock::SlotClock(double slot_duration_s, int slots_per_cycle)
    : slot_duration_(slot_duration_s), slots_per_cycle_(slots_per_cycle) {
  if (!(slot_duration_s > 0.0)) {
    throw std::invalid_argument("slot duration must be positive");
  }
  if (slots_per_cycle < 1) {
    throw std::invalid_argument("slots per cycle must be at least 1");
  }
}

int SlotClock::slot_of(double t_seconds) const {
  if (t_seconds < 0.0) {
    throw std::invalid_argument("slot_of: negative time");
  }
  const auto slot_number = static_cast<std::int64_t>(std::floor(t_seconds / slot_duration_));
  return static_cast<int>(slot_number % slots_per_cycle_);
}

std::vector<int> SlotClock::lookback_slots(int current_slot, int count) const {
  if (count < 1 || count > slots_per_cycle_) {
    throw std::invalid_argument("lookback count must be in [1, slots_per_cycle]");
  }
  if (current_slot < 0 || current_slot >= slots_per_cycle_) {
    throw std::invalid_argument("current slot out of range");
  }
  std::vector<int> slots;
  slots.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    slots.push_back((current_slot + k) % slots_per_cycle_);
  }
  return slots;
}

}  // namespace pis

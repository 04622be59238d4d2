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

#ifndef PIS_INGEST_HPP_
#define PIS_INGEST_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pis/model.hpp"

namespace pis {

// Raised for malformed input; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Normalized contact trace.
//
// Text layout, one record per line:
//
//   # nodes=N duration=S [epoch=E]
//   <time_s> <node_a> <node_b> up|down
//
// Times are seconds since the epoch, written in the shortest form that parses
// back to the same double. Events are sorted by time and alternate up/down
// per unordered pair.
struct NormalizedTrace {
  std::size_t num_nodes = 0;
  double epoch = 0.0;
  double duration = 0.0;
  std::vector<ContactEvent> events;
  // Source line of each event, parallel to `events` (empty when synthesized).
  std::vector<std::size_t> lines;
};

enum class TraceFormat { kNormalized, kSigcomm09, kInfocom06 };

TraceFormat parse_trace_format(std::string_view name);
std::string_view trace_format_name(TraceFormat format);

struct ConvertOptions {
  // Sightings of a pair closer than this merge into one contact.
  double gap_threshold_s = 260.0;
  // Nominal scan period; a contact ends this long after its last sighting.
  double sampling_period_s = 120.0;
  // Subtracted from every raw node id (1-based datasets use 1).
  std::uint32_t id_offset = 0;
};

// Raw observation that nodes a and b were in range over [start, end].
struct Sighting {
  double start = 0.0;
  double end = 0.0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

// Merges per-pair sightings into up/down intervals. Times are rebased so the
// earliest sighting is t = 0; the original offset becomes the epoch.
NormalizedTrace coalesce_sightings(std::vector<Sighting> sightings, const ConvertOptions& options);

NormalizedTrace parse_trace(std::istream& in, TraceFormat format,
                            const ConvertOptions& options = {});
NormalizedTrace parse_trace(const std::filesystem::path& path, TraceFormat format,
                            const ConvertOptions& options = {});

// Checks ordering, pair alternation and id range. Throws ParseError naming
// the offending line.
void validate_trace(const NormalizedTrace& trace);

void write_trace(const NormalizedTrace& trace, std::ostream& out);
std::string serialize_trace(const NormalizedTrace& trace);

// Static interests and friendships per node.
class ProfileStore {
 public:
  std::size_t size() const { return profiles_.size(); }
  // Empty profile for ids outside the store.
  const Profile& profile(NodeId node) const;
  const std::vector<Profile>& profiles() const { return profiles_; }
  // Grows to at least n entries; new entries are empty.
  void ensure_size(std::size_t n);

  InterestId intern(const std::string& interest);
  std::optional<InterestId> find_interest(const std::string& interest) const;
  const std::string& interest_name(InterestId id) const;
  std::size_t interest_count() const { return interest_names_.size(); }

  void add_friendship(NodeId x, NodeId y);
  void add_interest(NodeId node, InterestId interest);

  const std::vector<std::string>& warnings() const { return warnings_; }
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

 private:
  std::vector<Profile> profiles_;
  std::vector<std::string> interest_names_;
  std::unordered_map<std::string, InterestId> interest_ids_;
  std::vector<std::string> warnings_;
};

// Profile layout, one record per line:
//
//   node_id | interest,interest,... | friend,friend,...
//
// A friend token `lang:<tag>` puts the node in a language group; all members
// of a group become mutual friends. Friendship is symmetrized and
// self-friendship dropped. Node ids at or beyond `num_nodes` only warn.
ProfileStore parse_profiles(std::istream& in, std::optional<std::size_t> num_nodes = std::nullopt);
ProfileStore parse_profiles(const std::filesystem::path& path,
                            std::optional<std::size_t> num_nodes = std::nullopt);

}  // namespace pis

#endif  // PIS_INGEST_HPP_

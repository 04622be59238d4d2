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

#include <gtest/gtest.h>

#include <map>
#include <memory>
#include <tuple>
#include <stdexcept>

#include "fake_view.hpp"
#include "pis/engine.hpp"
#include "pis/experiment.hpp"
#include "pis/ingest.hpp"
#include "pis/router_baselines.hpp"
#include "pis/router_pis.hpp"
#include "test_util.hpp"

namespace pis {
namespace {

using testutil::fixture;
using testutil::M;
using testutil::message;
using testutil::N;
using testutil::S;

NormalizedTrace make_trace(std::size_t nodes, double duration,
                           std::vector<std::tuple<double, std::uint32_t, std::uint32_t, bool>> events) {
  NormalizedTrace t;
  t.num_nodes = nodes;
  t.duration = duration;
  for (const auto& [time, a, b, up] : events) {
    t.events.push_back({time, N(a), N(b), up ? LinkEvent::kUp : LinkEvent::kDown});
  }
  return t;
}

EngineConfig short_config() {
  EngineConfig c;
  c.duration_s = 20000.0;
  c.warmup_s = 1000.0;
  c.rng_seed = 7;
  return c;
}

Message sized(std::uint64_t id, std::int64_t size, double created_s = 0.0, double ttl_s = 100.0) {
  Message m = message(id, 0, 1);
  m.size = size;
  m.created_at = S(created_s);
  m.ttl = S(ttl_s);
  return m;
}

// Buffer policy

TEST(MessageBufferTest, AcceptsWhenItFits) {
  MessageBuffer b(5000000);
  const auto result = enforce_buffer(b, sized(1, 1000000), S(0));
  EXPECT_TRUE(result.accepted);
  EXPECT_TRUE(result.dropped.empty());
  EXPECT_EQ(b.used(), 1000000);
}

TEST(MessageBufferTest, DropsOldestReceivedFirst) {
  MessageBuffer b(3000);
  for (std::uint64_t id = 1; id <= 3; ++id) ASSERT_TRUE(b.enforce(sized(id, 1000), S(id)).accepted);
  const auto result = b.enforce(sized(4, 1500), S(10));
  ASSERT_TRUE(result.accepted);
  ASSERT_EQ(result.dropped.size(), 2u);
  EXPECT_EQ(result.dropped[0].id, M(1));
  EXPECT_EQ(result.dropped[1].id, M(2));
  EXPECT_TRUE(b.holds(M(3)));
  EXPECT_TRUE(b.holds(M(4)));
  EXPECT_EQ(b.used(), 2500);
}

TEST(MessageBufferTest, RefusesOversizedMessage) {
  MessageBuffer b(5000);
  ASSERT_TRUE(b.enforce(sized(1, 4000), S(0)).accepted);
  const auto result = b.enforce(sized(2, 6000), S(1));
  EXPECT_FALSE(result.accepted);
  EXPECT_TRUE(result.dropped.empty());
  EXPECT_TRUE(b.holds(M(1)));
  EXPECT_FALSE(b.holds(M(2)));
}

TEST(ExpireTtlTest, StrictBoundary) {
  MessageBuffer b(10000);
  b.enforce(sized(1, 10, 0.0, 100.0), S(0));
  EXPECT_TRUE(expire_ttl(b, S(100)).empty());
  const auto gone = expire_ttl(b, S(101));
  ASSERT_EQ(gone.size(), 1u);
  EXPECT_EQ(gone[0], M(1));
}

TEST(ExpireTtlTest, OnlyOverAgeReplicasRemoved) {
  MessageBuffer b(10000);
  b.enforce(sized(1, 10, 0.0), S(0));
  b.enforce(sized(2, 10, 50.0), S(50));
  b.enforce(sized(3, 10, 100.0), S(100));
  // Ages 200, 150 and exactly 100 at t = 200.
  const auto gone = expire_ttl(b, S(200));
  EXPECT_EQ(gone, (std::vector<MessageId>{M(1), M(2)}));
  EXPECT_TRUE(b.holds(M(3)));
  EXPECT_EQ(b.used(), 10);
}

// Workload

TEST(WorkloadTest, UniformDistinctPairsAfterWarmup) {
  EngineConfig c = short_config();
  const auto w = generate_workload(c, 10);
  ASSERT_FALSE(w.empty());
  SimTime prev = S(c.warmup_s);
  for (const MessageSpec& m : w) {
    EXPECT_NE(m.src, m.dst);
    EXPECT_LT(to_index(m.src), 10u);
    EXPECT_LT(to_index(m.dst), 10u);
    EXPECT_GE(m.size, c.message_size_min);
    EXPECT_LE(m.size, c.message_size_max);
    EXPECT_GE(m.created_at - prev, S(c.message_interval_min_s));
    EXPECT_LE(m.created_at - prev, S(c.message_interval_max_s));
    EXPECT_LT(m.created_at, S(c.duration_s));
    prev = m.created_at;
  }
  EXPECT_EQ(w, generate_workload(c, 10));
  c.rng_seed = 8;
  EXPECT_NE(w, generate_workload(c, 10));
}

TEST(EngineConfigTest, Validation) {
  EngineConfig c;
  EXPECT_NO_THROW(c.validate());
  c.warmup_s = c.duration_s;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EngineConfig{};
  c.message_interval_min_s = 700.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EngineConfig{};
  c.message_size_max = c.message_size_min - 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

// Runs

TEST(EngineRunTest, EmptyTrace) {
  const NormalizedTrace trace = make_trace(5, 20000.0, {});
  EpidemicRouter router;
  const MetricsReport r = run(trace, ProfileStore{}, router, short_config());
  EXPECT_EQ(r.stats.contacts, 0);
  EXPECT_GT(r.final_snapshot.created, 0);
  EXPECT_EQ(r.final_snapshot.delivered, 0);
  EXPECT_EQ(r.final_snapshot.delivery_ratio, 0.0);
}

TEST(EngineRunTest, TwoNodesAlwaysInContactDeliverEverything) {
  const NormalizedTrace trace = make_trace(2, 20000.0, {{0.0, 0, 1, true}, {20000.0, 0, 1, false}});
  EngineConfig c = short_config();
  c.message_size_min = c.message_size_max = 1000000;
  EpidemicRouter router;
  const MetricsReport r = run(trace, ProfileStore{}, router, c);
  ASSERT_GT(r.final_snapshot.created, 0);
  EXPECT_EQ(r.final_snapshot.delivery_ratio, 1.0);
  // 1 MB at 250 kB/s.
  EXPECT_EQ(r.final_snapshot.avg_latency_s, 4.0);
  EXPECT_EQ(r.final_snapshot.avg_hop_count, 1.0);
  EXPECT_EQ(r.final_snapshot.overhead_ratio, 0.0);
}

TEST(EngineRunTest, LinkDownAbortsPartialTransfer) {
  // One message appears at ~10 s; its 4 s transfer cannot finish by 12 s.
  const NormalizedTrace trace = make_trace(2, 100.0, {{0.0, 0, 1, true}, {12.0, 0, 1, false}});
  EngineConfig c;
  c.duration_s = 100.0;
  c.warmup_s = 0.0;
  c.message_interval_min_s = 10.0;
  c.message_interval_max_s = 11.0;
  c.message_size_min = c.message_size_max = 1000000;
  EpidemicRouter router;
  const MetricsReport r = run(trace, ProfileStore{}, router, c);
  EXPECT_GE(r.stats.transfers_aborted, 1);
  EXPECT_EQ(r.final_snapshot.delivered, 0);
  EXPECT_EQ(r.final_snapshot.relays, 0);
}

TEST(EngineRunTest, MessagesBeforeWarmupAreNotCounted) {
  const NormalizedTrace trace = make_trace(2, 20000.0, {{0.0, 0, 1, true}, {20000.0, 0, 1, false}});
  const EngineConfig c = short_config();
  EpidemicRouter router;
  const MetricsReport r = run(trace, ProfileStore{}, router, c);
  for (const DeliveryRecord& rec : r.records) EXPECT_GE(rec.created_at, S(c.warmup_s));
  EXPECT_EQ(static_cast<std::size_t>(r.final_snapshot.created), generate_workload(c, 2).size());
}

TEST(EngineRunTest, RejectsUnknownNode) {
  const NormalizedTrace trace = make_trace(2, 100.0, {{0.0, 0, 5, true}});
  EpidemicRouter router;
  EXPECT_THROW(run(trace, ProfileStore{}, router, short_config()), ParseError);
}

struct Fixture {
  NormalizedTrace trace;
  ProfileStore profiles;
};

Fixture load(const std::string& name) {
  Fixture f;
  f.trace = parse_trace(fixture(name + ".trace"), TraceFormat::kNormalized);
  f.profiles = parse_profiles(fixture(name + ".profiles"), f.trace.num_nodes);
  return f;
}

std::unique_ptr<Router> router_named(const std::string& name) {
  ExperimentConfig c;
  return make_router(c, name);
}

TEST(EngineRunTest, SameSeedIsBitIdentical) {
  const Fixture f = load("small10");
  for (const std::string name : {"pis", "prophet", "simbet", "snw", "epidemic"}) {
    auto r1 = router_named(name);
    auto r2 = router_named(name);
    const MetricsReport a = run(f.trace, f.profiles, *r1, EngineConfig{});
    const MetricsReport b = run(f.trace, f.profiles, *r2, EngineConfig{});
    EXPECT_EQ(to_csv(a), to_csv(b)) << name;
    EXPECT_EQ(to_json(a), to_json(b)) << name;
    EXPECT_EQ(a.stats, b.stats) << name;
  }
}

TEST(EngineRunTest, CopyBudgetHoldsAtEveryEvent) {
  const Fixture f = load("small10");
  for (const std::string name : {"pis", "snw"}) {
    auto router = router_named(name);
    EngineConfig c;
    c.message_interval_min_s = 100.0;
    c.message_interval_max_s = 150.0;
    Simulation sim(f.trace, f.profiles, *router, c);
    std::int64_t checked = 0;
    std::int64_t violations = 0;
    sim.set_event_observer([&](const Simulation& s, SimTime) {
      ++checked;
      violations += s.copy_violations();
    });
    const MetricsReport r = sim.run();
    EXPECT_GT(checked, 1000) << name;
    EXPECT_EQ(violations, 0) << name;
    EXPECT_GT(r.final_snapshot.created, 900) << name;
  }
}

TEST(EngineRunTest, RoutersSeeTheSameContactsAndWorkload) {
  const Fixture f = load("community20");
  std::map<std::string, MetricsReport> reports;
  for (const std::string name : {"pis", "prophet", "simbet", "snw", "epidemic"}) {
    auto router = router_named(name);
    reports[name] = run(f.trace, f.profiles, *router, EngineConfig{});
  }
  const MetricsReport& ref = reports.at("epidemic");
  for (const auto& [name, r] : reports) {
    EXPECT_EQ(r.stats.contacts, ref.stats.contacts) << name;
    EXPECT_EQ(r.final_snapshot.created, ref.final_snapshot.created) << name;
    ASSERT_EQ(r.records.size(), ref.records.size()) << name;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      EXPECT_EQ(r.records[i].created_at, ref.records[i].created_at);
    }
    if (name != "epidemic") EXPECT_GE(ref.final_snapshot.relays, r.final_snapshot.relays) << name;
  }
  EXPECT_LE(reports.at("pis").final_snapshot.overhead_ratio, ref.final_snapshot.overhead_ratio);
}

TEST(EngineRunTest, DeliveriesAreASubsetOfRelays) {
  const Fixture f = load("small10");
  auto router = router_named("pis");
  const MetricsReport r = run(f.trace, f.profiles, *router, EngineConfig{});
  for (const DeliveryRecord& rec : r.records) {
    if (!rec.delivered_at) continue;
    EXPECT_GE(*rec.delivered_at, rec.created_at);
    EXPECT_GE(rec.hop_count, 1);
    EXPECT_FALSE(rec.relay_times.empty());
  }
  EXPECT_LE(r.final_snapshot.delivered, r.final_snapshot.relays);
}

}  // namespace
}  // namespace pis

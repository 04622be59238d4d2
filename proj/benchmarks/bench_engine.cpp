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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "pis/engine.hpp"
#include "pis/experiment.hpp"
#include "pis/ingest.hpp"

namespace {

void BM_EngineRun(benchmark::State& state, const std::string& fixture, const std::string& router) {
  const std::filesystem::path dir = PIS_FIXTURE_DIR;
  const auto trace = pis::parse_trace(dir / (fixture + ".trace"), pis::TraceFormat::kNormalized);
  const auto profiles = pis::parse_profiles(dir / (fixture + ".profiles"), trace.num_nodes);
  const pis::ExperimentConfig config;
  for (auto _ : state) {
    auto r = pis::make_router(config, router);
    benchmark::DoNotOptimize(pis::run(trace, profiles, *r, config.engine));
  }
}
BENCHMARK_CAPTURE(BM_EngineRun, community20_pis, std::string("community20"), std::string("pis"))
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineRun, community20_epidemic, std::string("community20"), std::string("epidemic"))
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineRun, community20_simbet, std::string("community20"), std::string("simbet"))
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineRun, small10_pis, std::string("small10"), std::string("pis"))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

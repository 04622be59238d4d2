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

// Ego betweenness by explicit shortest-path counting (BFS), for checking the
// closed-form evaluation used by the SimBet router.

#ifndef PIS_TESTS_ORACLE_BETWEENNESS_ORACLE_HPP_
#define PIS_TESTS_ORACLE_BETWEENNESS_ORACLE_HPP_

#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

namespace oracle {

struct PathCounts {
  std::vector<int> dist;
  std::vector<double> paths;
};

inline PathCounts bfs(const std::vector<std::vector<int>>& adj, std::size_t source) {
  const std::size_t n = adj.size();
  PathCounts pc{std::vector<int>(n, std::numeric_limits<int>::max()), std::vector<double>(n, 0.0)};
  pc.dist[source] = 0;
  pc.paths[source] = 1.0;
  std::deque<std::size_t> queue{source};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (adj[u][v] == 0 || v == u) continue;
      if (pc.dist[v] == std::numeric_limits<int>::max()) {
        pc.dist[v] = pc.dist[u] + 1;
        queue.push_back(v);
      }
      if (pc.dist[v] == pc.dist[u] + 1) pc.paths[v] += pc.paths[u];
    }
  }
  return pc;
}

// Sum over unordered pairs (i, j) of the other nodes of the share of i-j
// shortest paths passing through node 0.
inline double ego_betweenness_bfs(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  const PathCounts from_ego = bfs(adj, 0);
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const PathCounts from_i = bfs(adj, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (from_i.paths[j] == 0.0) continue;
      if (from_i.dist[0] + from_ego.dist[j] != from_i.dist[j]) continue;
      total += from_i.paths[0] * from_ego.paths[j] / from_i.paths[j];
    }
  }
  return total;
}

}  // namespace oracle

#endif  // PIS_TESTS_ORACLE_BETWEENNESS_ORACLE_HPP_

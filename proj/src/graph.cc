// src/graph.cc

// Copyright 2026  GraphRefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "graphrefine/graph.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace graphrefine {

namespace {

// Squared Euclidean distance accumulated in a fixed component order so the
// brute-force oracle in the tests can reproduce results bit for bit.
double squared_distance(const float* a, const float* b, int d) {
  double sq = 0.0;
  for (int t = 0; t < d; ++t) {
    double diff = static_cast<double>(a[t]) - static_cast<double>(b[t]);
    sq += diff * diff;
  }
  return sq;
}

double dot(const float* a, const float* b, int d) {
  double s = 0.0;
  for (int t = 0; t < d; ++t) {
    s += static_cast<double>(a[t]) * static_cast<double>(b[t]);
  }
  return s;
}

void require_normalized(const EmbeddingSet& e) {
  if (!is_normalized(e)) {
    throw Error(ErrorCode::kInvalidArgument,
                "embeddings must be unit-normalized before graph "
                "construction (run normalize first)");
  }
}

}  // namespace

SimilarityGraph SimilarityGraph::from_edges(
    std::int64_t n,
    const std::vector<std::tuple<std::int64_t, std::int64_t, double>>& edges) {
  SimilarityGraph g(n);
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& [i, j, s] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw Error(ErrorCode::kOutOfRange,
                  "edge endpoint outside 0.." + std::to_string(n - 1));
    }
    if (i == j) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop at node " + std::to_string(i));
    }
    if (!std::isfinite(s) || s < -1.0 - 1e-9 || s > 1.0 + 1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "similarity " + std::to_string(s) + " outside [-1, 1]");
    }
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate edge (" + std::to_string(i) + "," +
                      std::to_string(j) + ")");
    }
    g.add_undirected(i, j, s);
  }
  g.sort_lists();
  return g;
}

void SimilarityGraph::add_undirected(std::int64_t i, std::int64_t j, double s) {
  adjacency_[i].push_back({j, s});
  adjacency_[j].push_back({i, s});
}

void SimilarityGraph::sort_lists() {
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  }
}

std::int64_t SimilarityGraph::num_edges() const {
  std::int64_t directed = 0;
  for (const auto& list : adjacency_) {
    directed += static_cast<std::int64_t>(list.size());
  }
  return directed / 2;
}

bool SimilarityGraph::has_edge(std::int64_t i, std::int64_t j) const {
  const auto& list = adjacency_[i];
  auto it = std::lower_bound(
      list.begin(), list.end(), j,
      [](const Neighbor& nb, std::int64_t id) { return nb.id < id; });
  return it != list.end() && it->id == j;
}

double SimilarityGraph::similarity(std::int64_t i, std::int64_t j) const {
  const auto& list = adjacency_[i];
  auto it = std::lower_bound(
      list.begin(), list.end(), j,
      [](const Neighbor& nb, std::int64_t id) { return nb.id < id; });
  if (it == list.end() || it->id != j) {
    throw Error(ErrorCode::kEdgeMissing,
                "no edge (" + std::to_string(i) + "," + std::to_string(j) +
                    ")");
  }
  return it->similarity;
}

std::vector<Edge> SimilarityGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(num_edges()));
  for (std::int64_t i = 0; i < num_nodes(); ++i) {
    for (const Neighbor& nb : adjacency_[i]) {
      if (nb.id > i) out.push_back({i, nb.id});
    }
  }
  return out;
}

std::vector<std::vector<std::int64_t>> knn_search(const EmbeddingSet& e,
                                                  int k) {
  const std::int64_t n = e.size();
  if (k < 1 || k >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                    ", n=" + std::to_string(n) + ")");
  }
  require_normalized(e);
  const int d = e.dim();
  const float* data = e.rows().data();

  std::vector<std::vector<std::int64_t>> result(n);
  std::vector<std::pair<double, std::int64_t>> dists(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const float* qi = data + i * d;
    std::size_t count = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dists[count++] = {squared_distance(qi, data + j * d, d), j};
    }
    // (distance, id) ordering gives the ascending-distance, lower-id tie
    // break in one comparison.
    std::nth_element(dists.begin(), dists.begin() + (k - 1),
                     dists.begin() + count);
    std::sort(dists.begin(), dists.begin() + k);
    auto& out = result[i];
    out.resize(k);
    for (int t = 0; t < k; ++t) out[t] = dists[t].second;
  }
  return result;
}

SimilarityGraph build_graph(const EmbeddingSet& e, int k,
                            double prune_threshold,
                            const GraphBuildOptions& options) {
  const auto knn = knn_search(e, k);
  const std::int64_t n = e.size();
  const int d = e.dim();
  const float* data = e.rows().data();

  // Directed membership test for symmetrization.
  std::vector<std::set<std::int64_t>> lists(n);
  for (std::int64_t i = 0; i < n; ++i) {
    lists[i] = std::set<std::int64_t>(knn[i].begin(), knn[i].end());
  }

  SimilarityGraph g(n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j : knn[i]) {
      if (j < i && lists[j].count(i)) continue;  // already added from j
      const bool mutual = lists[j].count(i) > 0;
      if (options.symmetrize == Symmetrize::kMutual && !mutual) continue;
      const double s = dot(data + i * d, data + j * d, d);
      if (options.prune_stage == PruneStage::kBeforeSymmetrize &&
          s < prune_threshold) {
        continue;
      }
      g.add_undirected(i, j, s);
    }
  }
  g.sort_lists();

  if (options.prune_stage == PruneStage::kAfterSymmetrize) {
    std::vector<Edge> low;
    for (std::int64_t i = 0; i < n; ++i) {
      for (const Neighbor& nb : g.neighbors(i)) {
        if (nb.id > i && nb.similarity < prune_threshold) {
          low.push_back({i, nb.id});
        }
      }
    }
    if (!low.empty()) g = remove_edges(g, low);
  }
  return g;
}

SimilarityGraph remove_edges(const SimilarityGraph& g,
                             const std::vector<Edge>& edges) {
  std::set<std::pair<std::int64_t, std::int64_t>> drop;
  for (const Edge& e : edges) {
    if (e.a < 0 || e.b >= g.num_nodes()) {
      throw Error(ErrorCode::kOutOfRange,
                  "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                      ") outside the graph");
    }
    if (!g.has_edge(e.a, e.b)) {
      throw Error(ErrorCode::kEdgeMissing,
                  "cannot remove absent edge (" + std::to_string(e.a) + "," +
                      std::to_string(e.b) + ")");
    }
    drop.insert({e.a, e.b});
  }
  SimilarityGraph out(g.num_nodes());
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.id > i && !drop.count({i, nb.id})) {
        out.add_undirected(i, nb.id, nb.similarity);
      }
    }
  }
  out.sort_lists();
  return out;
}

NormalizedAdjacency normalized_adjacency(const SimilarityGraph& g,
                                         bool self_loops, bool weighted) {
  NormalizedAdjacency a;
  const std::int64_t n = g.num_nodes();
  a.rows_.resize(n);
  std::vector<double> inv_sqrt_deg(n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t d = g.degree(i) + (self_loops ? 1 : 0);
    if (d > 0) inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(d));
  }
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = a.rows_[i];
    row.reserve(g.neighbors(i).size() + (self_loops ? 1 : 0));
    bool diagonal_placed = !self_loops;
    for (const Neighbor& nb : g.neighbors(i)) {
      if (!diagonal_placed && nb.id > i) {
        row.push_back({i, inv_sqrt_deg[i] * inv_sqrt_deg[i]});
        diagonal_placed = true;
      }
      const double w = weighted ? nb.similarity : 1.0;
      row.push_back({nb.id, w * inv_sqrt_deg[i] * inv_sqrt_deg[nb.id]});
    }
    if (!diagonal_placed) {
      row.push_back({i, inv_sqrt_deg[i] * inv_sqrt_deg[i]});
    }
  }
  return a;
}

void save_graph_csv(const SimilarityGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << "src,dst,similarity\n";
  char buffer[64];
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.id <= i) continue;
      std::snprintf(buffer, sizeof(buffer), "%lld,%lld,%.6f",
                    static_cast<long long>(i), static_cast<long long>(nb.id),
                    nb.similarity);
      out << buffer << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

SimilarityGraph load_graph_csv(const std::string& path, std::int64_t n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "src,dst,similarity") {
    throw Error(ErrorCode::kBadMagic,
                path + " does not start with the src,dst,similarity header");
  }
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> edges;
  std::int64_t max_id = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::int64_t src = 0, dst = 0;
    double s = 0.0;
    char c1 = 0, c2 = 0;
    if (!(row >> src >> c1 >> dst >> c2 >> s) || c1 != ',' || c2 != ',') {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": malformed row '" + line + "'");
    }
    if (src >= dst) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": edges must satisfy src < dst, got '" + line + "'");
    }
    edges.emplace_back(src, dst, s);
    max_id = std::max(max_id, dst);
  }
  if (n < 0) n = max_id + 1;
  if (max_id >= n) {
    throw Error(ErrorCode::kOutOfRange,
                path + ": node id " + std::to_string(max_id) +
                    " exceeds declared node count " + std::to_string(n));
  }
  return SimilarityGraph::from_edges(n, edges);
}

}  // namespace graphrefine

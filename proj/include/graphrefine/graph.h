// include/graphrefine/graph.h

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

#ifndef GRAPHREFINE_GRAPH_H_
#define GRAPHREFINE_GRAPH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "graphrefine/embedding.h"
#include "graphrefine/metrics.h"

namespace graphrefine {

struct Neighbor {
  std::int64_t id = 0;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Sparse symmetric similarity graph. Neighbor lists are sorted by id,
/// carry no self-loops or duplicates, and mirror each other exactly:
/// (j, s) in adjacency[i] iff (i, s) in adjacency[j].
class SimilarityGraph {
 public:
  explicit SimilarityGraph(std::int64_t n) : adjacency_(n) {}

  /// Builds from an undirected edge list (validates, symmetrizes, sorts).
  static SimilarityGraph from_edges(
      std::int64_t n,
      const std::vector<std::tuple<std::int64_t, std::int64_t, double>>& edges);

  std::int64_t num_nodes() const {
    return static_cast<std::int64_t>(adjacency_.size());
  }
  std::int64_t num_edges() const;

  const std::vector<Neighbor>& neighbors(std::int64_t node) const {
    return adjacency_[node];
  }
  std::int64_t degree(std::int64_t node) const {
    return static_cast<std::int64_t>(adjacency_[node].size());
  }

  /// Similarity of an existing edge; throws kEdgeMissing otherwise.
  double similarity(std::int64_t i, std::int64_t j) const;

  bool has_edge(std::int64_t i, std::int64_t j) const;

  /// All undirected edges, lower id first, ordered by (a, b).
  std::vector<Edge> edges() const;

  bool operator==(const SimilarityGraph& other) const {
    return adjacency_ == other.adjacency_;
  }

  /// Inserts both directions; caller must avoid duplicates and self-loops
  /// and call sort_lists() before handing the graph out.
  void add_undirected(std::int64_t i, std::int64_t j, double s);
  void sort_lists();

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
};

enum class Symmetrize { kUnion, kMutual };
enum class PruneStage { kAfterSymmetrize, kBeforeSymmetrize };

struct GraphBuildOptions {
  Symmetrize symmetrize = Symmetrize::kUnion;
  PruneStage prune_stage = PruneStage::kAfterSymmetrize;
};

/// Exact k-nearest neighbors by Euclidean distance, self excluded, ties
/// broken by lower id. Each per-node list is sorted by ascending distance.
/// Requires 1 <= k < n and unit-normalized embeddings.
std::vector<std::vector<std::int64_t>> knn_search(const EmbeddingSet& e,
                                                  int k);

/// KNN graph: directed k-NN lists symmetrized (union by default), then
/// edges with similarity < prune_threshold removed. Similarities are
/// cosines, i.e. dot products of the unit rows. Isolated nodes permitted.
SimilarityGraph build_graph(const EmbeddingSet& e, int k,
                            double prune_threshold,
                            const GraphBuildOptions& options = {});

/// Returns a copy of `g` without the listed edges (both directions).
/// A listed edge absent from the graph is an error.
SimilarityGraph remove_edges(const SimilarityGraph& g,
                             const std::vector<Edge>& edges);

/// Degree-normalized adjacency: entry (i,j) = w_ij / sqrt(d_i * d_j) for
/// each edge, with w_ij = 1 (unweighted) or the stored similarity.
/// Symmetric; zero diagonal unless self_loops, in which case A+I is
/// normalized with the incremented degrees.
class NormalizedAdjacency {
 public:
  std::int64_t num_nodes() const {
    return static_cast<std::int64_t>(rows_.size());
  }
  const std::vector<Neighbor>& row(std::int64_t i) const { return rows_[i]; }

 private:
  friend NormalizedAdjacency normalized_adjacency(const SimilarityGraph&, bool,
                                                  bool);
  std::vector<std::vector<Neighbor>> rows_;
};

NormalizedAdjacency normalized_adjacency(const SimilarityGraph& g,
                                         bool self_loops = false,
                                         bool weighted = false);

// Graph CSV: header "src,dst,similarity", one undirected edge per line
// with src < dst and 6-decimal similarity. The loader re-symmetrizes and
// validates. `n` fixes the node count; pass -1 to infer max id + 1.
void save_graph_csv(const SimilarityGraph& g, const std::string& path);
SimilarityGraph load_graph_csv(const std::string& path, std::int64_t n = -1);

}  // namespace graphrefine

#endif  // GRAPHREFINE_GRAPH_H_

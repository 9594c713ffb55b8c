// include/graphrefine/scoring.h

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

#ifndef GRAPHREFINE_SCORING_H_
#define GRAPHREFINE_SCORING_H_

#include <string>
#include <vector>

#include "graphrefine/graph.h"
#include "graphrefine/labels.h"

namespace graphrefine {

/// How an edge (i,j) is scored from its common neighborhood:
///   kProduct:     sum_k S(i,k) * S(j,k)
///   kSum:         sum_k (S(i,k) + S(j,k))
///   kWeighted:    sum_k (alpha_i * S(i,k) + alpha_j * S(j,k)) with
///                 alpha_i = |N_common(i,j)| / |N(i)|
///   kGcnWeighted: kWeighted applied after GCN edge pruning; scoring a
///                 graph directly is identical to kWeighted (the pruning
///                 happens upstream).
enum class ScoringMethod { kProduct, kSum, kWeighted, kGcnWeighted };

std::string to_string(ScoringMethod method);
ScoringMethod scoring_method_from_string(const std::string& name);

struct EdgeScore {
  std::int64_t i = 0;
  std::int64_t j = 0;
  double raw = 0.0;           // S(i,j) stored on the edge
  double common_score = 0.0;  // C(i,j) under the chosen method
  double alpha_i = 0.0;       // |N_common| / |N(i)|
  double alpha_j = 0.0;       // |N_common| / |N(j)|
};

/// N(i) intersect N(j), excluding i and j themselves. Both ids must be in
/// range and distinct.
std::vector<std::int64_t> common_neighbors(const SimilarityGraph& g,
                                           std::int64_t i, std::int64_t j);

/// Scores one existing edge. An empty common neighborhood scores 0 under
/// every method.
EdgeScore score_edge(const SimilarityGraph& g, std::int64_t i, std::int64_t j,
                     ScoringMethod method);

/// Scores every undirected edge of the graph, ordered by (i, j).
std::vector<EdgeScore> score_all_edges(const SimilarityGraph& g,
                                       ScoringMethod method);

/// Keeps edges whose common-neighbor score reaches score_threshold and
/// labels the connected components of the kept-edge graph. Component ids
/// are dense, assigned by ascending smallest member; isolated nodes each
/// form their own cluster.
LabelAssignment cluster_by_threshold(const SimilarityGraph& g,
                                     ScoringMethod method,
                                     double score_threshold);

/// Ranks classes by mean intra-class edge score, drops classes smaller
/// than min_size, and keeps the best classes until the retained sample
/// count first reaches target_fraction * n. Everything else becomes
/// UNASSIGNED. Retained classes keep their ids.
LabelAssignment select_reliable_classes(const LabelAssignment& labels,
                                        const SimilarityGraph& g,
                                        double target_fraction,
                                        std::int64_t min_size,
                                        ScoringMethod method =
                                            ScoringMethod::kWeighted);

/// Scoring dump for debugging: CSV "src,dst,raw,common_score".
void save_scores_csv(const std::vector<EdgeScore>& scores,
                     const std::string& path);

}  // namespace graphrefine

#endif  // GRAPHREFINE_SCORING_H_

// include/graphrefine/metrics.h

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

#ifndef GRAPHREFINE_METRICS_H_
#define GRAPHREFINE_METRICS_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "graphrefine/labels.h"

namespace graphrefine {

/// Undirected edge as an unordered node pair (stored lower id first).
struct Edge {
  std::int64_t a = 0;
  std::int64_t b = 0;

  Edge() = default;
  Edge(std::int64_t i, std::int64_t j) : a(i < j ? i : j), b(i < j ? j : i) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalized mutual information in [0, 1]: mutual information divided by
/// the arithmetic mean of the two partition entropies. Symmetric and
/// invariant under relabeling. Rejects UNASSIGNED entries and length
/// mismatches. Two zero-entropy partitions score 1.0 (identical up to
/// relabeling); exactly one zero-entropy side scores 0.0.
double nmi(const LabelAssignment& a, const LabelAssignment& b);

/// Precision/recall of a predicted edge set against ground-truth labels.
/// An edge is a true positive iff both endpoints share the truth label.
/// Recall counts against the positive edges of `candidates` (the edge set
/// the prediction was allowed to keep). Undefined ratios (no predicted
/// edges; no positive candidates) are reported as nullopt.
struct EdgeMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::int64_t true_positives = 0;
  std::int64_t predicted = 0;
  std::int64_t positive_candidates = 0;
};

EdgeMetrics edge_metrics(const std::vector<Edge>& predicted,
                         const std::vector<Edge>& candidates,
                         const LabelAssignment& truth);

}  // namespace graphrefine

#endif  // GRAPHREFINE_METRICS_H_

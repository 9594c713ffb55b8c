// include/graphrefine/pipeline.h

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

#ifndef GRAPHREFINE_PIPELINE_H_
#define GRAPHREFINE_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "graphrefine/config.h"
#include "graphrefine/embedding.h"
#include "graphrefine/gcn.h"
#include "graphrefine/graph.h"
#include "graphrefine/labels.h"

namespace graphrefine {

struct IterationReport {
  int iteration = 0;
  std::int64_t num_clusters = 0;
  std::int64_t num_edges = 0;
  std::optional<double> nmi_vs_truth;
  std::optional<double> edge_precision;
  std::optional<double> edge_recall;
  // Training details; absent (defaults) for the initial clustering.
  std::int64_t retained_classes = 0;
  std::int64_t retained_samples = 0;
  bool gcn_skipped = false;
  std::vector<double> loss_trace;
};

struct RunReport {
  PipelineConfig config;
  std::int64_t num_samples = 0;
  int dim = 0;
  bool truth_provided = false;
  std::vector<IterationReport> iterations;

  std::string to_json() const;
  std::string to_text() const;
};

/// Full refinement loop over fixed embeddings: build the KNN graph,
/// cluster, then `iterations` rounds of class selection, edge-classifier
/// training, graph pruning, and re-clustering, each round retraining on
/// the newest labels. Artifacts land under run_dir (pass "" to skip
/// writing); intermediate state is quantized through the serialized
/// precision either way, so a written run and its reload agree exactly.
RunReport run_pipeline(const PipelineConfig& config,
                       const EmbeddingSet& embeddings,
                       const std::optional<LabelAssignment>& truth,
                       const std::string& run_dir = "");

struct AblationRow {
  std::string method;        // kmeans | product | sum | weighted | gcn_weighted
  std::optional<int> k;      // graph K; absent for the k-means baseline
  std::int64_t num_clusters = 0;
  double nmi_vs_truth = 0.0;
};

struct AblationReport {
  PipelineConfig config;
  std::vector<AblationRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Method comparison on one embedding set with known truth: a k-means
/// baseline row, the three common-neighbor scoring variants at k_graph,
/// and the GCN-refined variant at every K in config.ablation_ks.
AblationReport run_ablation(const PipelineConfig& config,
                            const EmbeddingSet& embeddings,
                            const LabelAssignment& truth,
                            const std::string& out_dir = "");

/// Rounds a similarity to the 6-decimal precision used by the graph CSV
/// format, exactly as a write/parse round trip would.
double quantize_similarity(double s);

/// Rebuilds the graph with every similarity quantized to CSV precision.
SimilarityGraph quantize_graph(const SimilarityGraph& g);

/// Casts every parameter through f32, exactly as a checkpoint round trip.
GcnModel quantize_model(const GcnModel& model);

}  // namespace graphrefine

#endif  // GRAPHREFINE_PIPELINE_H_

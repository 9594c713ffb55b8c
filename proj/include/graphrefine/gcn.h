// include/graphrefine/gcn.h

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

#ifndef GRAPHREFINE_GCN_H_
#define GRAPHREFINE_GCN_H_

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "graphrefine/embedding.h"
#include "graphrefine/graph.h"
#include "graphrefine/labels.h"
#include "graphrefine/scoring.h"

namespace graphrefine {

/// Graph convolutional edge classifier. Layer l maps node states through
///   H^(l+1) = relu(A_hat * H^(l) * W^(l) + X * W_input^(l))
/// so the input features are re-injected at every layer, and an edge head
///   p_ij = sigmoid(w . [h_i (+) h_j] + bias)
/// scores pairs of final node representations (lower id concatenated
/// first). dims = [D_input, D_1, ..., D_L].
struct GcnModel {
  std::vector<int> dims;
  std::vector<Eigen::MatrixXd> weights;        // W^(l): D_l x D_{l+1}
  std::vector<Eigen::MatrixXd> input_weights;  // W_input^(l): D_0 x D_{l+1}
  Eigen::VectorXd edge_head;                   // length 2 * D_L
  double edge_bias = 0.0;

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }

  /// Uniform(-s, s) init with s = sqrt(6 / (fan_in + fan_out)); zero bias.
  static GcnModel random_init(const std::vector<int>& dims,
                              std::uint64_t seed);

  /// Dimension-chain consistency plus finiteness of every parameter.
  void validate() const;

  /// Parameters as one flat vector in declaration order (each W row-major,
  /// then its W_input, then the edge head, then the bias). Basis for the
  /// checkpoint format, EMA blending, and finite-difference sweeps.
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& params);
  std::int64_t parameter_count() const;
};

// Checkpoint: "GCN1" | u32 layer count L | (L+1) u32 dims | f32 LE
// parameters in flatten() order. Bit-exact round trip.
void save_model(const GcnModel& model, const std::string& path);
GcnModel load_model(const std::string& path);

/// Class-balanced training sample: induced KNN graph over nodes drawn from
/// a handful of neighboring classes, with edges labeled by pseudo-label
/// agreement.
struct Subgraph {
  std::vector<std::int64_t> node_ids;  // ids in the parent embedding set
  SimilarityGraph graph{0};            // induced KNN graph (local ids)
  Eigen::MatrixXd features;            // node features, one row per node
  std::vector<Edge> edge_list;         // local ids, lower first
  std::vector<char> edge_labels;       // 1 = endpoints share pseudo-label

  std::int64_t positive_edges() const;
  std::int64_t negative_edges() const;
};

struct TrainConfig {
  int n1 = 5;      // classes per subgraph
  int n2 = 40;     // samples drawn per class
  int k_sub = 10;  // KNN k inside the subgraph
  int epochs = 50;
  double learning_rate = 1e-2;
  // Loss weight on negative edges; nullopt resolves to the subgraph's
  // positive/negative edge ratio so both sides carry equal mass.
  std::optional<double> neg_weight;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws the anchor class plus its n1-1 nearest retained classes (by
/// centroid cosine), samples min(n2, class size) members from each without
/// replacement, and builds the induced KNN graph with k_sub. Deterministic
/// per (seed, anchor, round).
Subgraph sample_subgraph(const EmbeddingSet& e, const LabelAssignment& labels,
                         const TrainConfig& cfg, std::int64_t anchor,
                         std::uint64_t round = 0);

/// All layer activations H^(0) .. H^(L); H^(0) is `x` itself.
std::vector<Eigen::MatrixXd> gcn_forward(const GcnModel& model,
                                         const NormalizedAdjacency& a_hat,
                                         const Eigen::MatrixXd& x);

/// Edge-existence probability from final node representations.
double edge_probability(const GcnModel& model, const Eigen::MatrixXd& h,
                        std::int64_t i, std::int64_t j);

/// Gradients in the same shapes as the model parameters.
struct GcnGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::MatrixXd> input_weights;
  Eigen::VectorXd edge_head;
  double edge_bias = 0.0;

  Eigen::VectorXd flatten() const;
};

/// Weighted binary cross-entropy over the subgraph's edges, each edge
/// contributing both concatenation orders. Returns the loss alone or the
/// loss plus analytic gradients through the edge head and every layer.
double edge_loss(const GcnModel& model, const Subgraph& sg,
                 std::optional<double> neg_weight = std::nullopt);
std::pair<double, GcnGradients> edge_loss_and_gradients(
    const GcnModel& model, const Subgraph& sg,
    std::optional<double> neg_weight = std::nullopt);

struct TrainResult {
  GcnModel model;
  std::vector<double> loss_trace;  // mean subgraph loss per epoch
  std::int64_t used_subgraphs = 0;
  std::int64_t skipped_subgraphs = 0;
};

/// Full-batch gradient descent per subgraph, cycling the subgraph list
/// once per epoch. Subgraphs without both edge polarities are skipped
/// with a warning; a non-finite loss aborts with diagnostics.
TrainResult train(GcnModel model, const std::vector<Subgraph>& subgraphs,
                  const TrainConfig& cfg);

/// Max relative error between analytic gradients and central finite
/// differences with step `epsilon`, over every parameter. The relative
/// error uses |a| + |n| floored at 1e-3 as the denominator so negligible
/// gradients do not dominate the report.
double gradient_check(const GcnModel& model, const Subgraph& sg,
                      double epsilon,
                      std::optional<double> neg_weight = std::nullopt);

struct EdgeProbability {
  std::int64_t src = 0;
  std::int64_t dst = 0;
  double probability = 0.0;
};

struct InferResult {
  SimilarityGraph graph{0};
  std::vector<EdgeProbability> report;  // every input edge, ordered (src,dst)
};

/// Scores every edge of the full graph with one shared forward pass and
/// removes edges with probability < p_cut.
InferResult infer_prune(const GcnModel& model, const SimilarityGraph& g,
                        const EmbeddingSet& e, double p_cut);

/// GCN-enhanced re-clustering: prune with the trained model, re-score the
/// surviving edges with the weighted common-neighbor similarity, and label
/// connected components above score_threshold.
LabelAssignment refine(const GcnModel& model, const SimilarityGraph& g,
                       const EmbeddingSet& e, double p_cut,
                       double score_threshold);

// Edge report CSV: "src,dst,probability" with 6-decimal probabilities.
void save_edge_report_csv(const std::vector<EdgeProbability>& report,
                          const std::string& path);

}  // namespace graphrefine

#endif  // GRAPHREFINE_GCN_H_

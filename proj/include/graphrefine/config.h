// include/graphrefine/config.h

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

#ifndef GRAPHREFINE_CONFIG_H_
#define GRAPHREFINE_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphrefine/scoring.h"

namespace graphrefine {

/// Every pipeline tunable in one flat document. JSON keys match the field
/// names; every key is optional and unknown keys are rejected before any
/// computation starts.
struct PipelineConfig {
  int k_graph = 50;
  double prune_threshold = 0.5;
  ScoringMethod scoring_method = ScoringMethod::kWeighted;
  double score_threshold = 0.5;
  double target_fraction = 0.25;
  std::int64_t min_class_size = 20;
  std::vector<int> gcn_dims = {256, 256};  // hidden dims; input dim comes
                                           // from the embeddings
  int n1 = 5;
  int n2 = 40;
  int k_sub = 10;
  int epochs = 50;
  double learning_rate = 1e-2;
  std::optional<double> neg_weight;  // nullopt = auto (per-subgraph ratio)
  double p_cut = 0.5;
  int iterations = 3;
  std::vector<int> ablation_ks = {10, 50, 100};
  std::uint64_t seed = 0;

  void validate() const;

  std::string to_json() const;
  static PipelineConfig from_json(const std::string& text);
  static PipelineConfig load(const std::string& path);
  void save(const std::string& path) const;

  /// Applies one "key=value" override (the CLI --set flag). The value is
  /// parsed as JSON, falling back to a plain string.
  void apply_override(const std::string& assignment);
};

}  // namespace graphrefine

#endif  // GRAPHREFINE_CONFIG_H_

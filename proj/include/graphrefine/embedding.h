// include/graphrefine/embedding.h

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

#ifndef GRAPHREFINE_EMBEDDING_H_
#define GRAPHREFINE_EMBEDDING_H_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphrefine/common.h"
#include "graphrefine/labels.h"

namespace graphrefine {

using RowMatrixF =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N x D matrix of sample embeddings with stable per-sample ids
/// (0..n-1 unless the caller reindexes).
class EmbeddingSet {
 public:
  EmbeddingSet(RowMatrixF rows, std::vector<std::int64_t> ids);

  /// Rows with default ids 0..n-1. Rejects empty matrices and non-finite
  /// components.
  explicit EmbeddingSet(RowMatrixF rows);

  std::int64_t size() const { return rows_.rows(); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  const RowMatrixF& rows() const { return rows_; }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  Eigen::Ref<const Eigen::RowVectorXf> row(std::int64_t i) const {
    return rows_.row(i);
  }

 private:
  RowMatrixF rows_;
  std::vector<std::int64_t> ids_;
};

/// Scales every row to unit Euclidean norm. A zero row is an error naming
/// the offending index.
EmbeddingSet normalize(const EmbeddingSet& embeddings);

/// True if every row has unit norm within `tolerance`.
bool is_normalized(const EmbeddingSet& embeddings, double tolerance = 1e-4);

// EMB1 file format: "EMB1" | u32 version=1 LE | u64 n LE | u32 d LE |
// n*d f32 LE row-major. No padding. Round trips are byte exact.
void save_embeddings(const EmbeddingSet& embeddings, const std::string& path);
EmbeddingSet load_embeddings(const std::string& path);

/// Synthetic ground-truth data: unit class centers uniform on the sphere,
/// samples = normalize(center + gaussian noise). Deterministic per seed.
struct SynthSpec {
  int num_classes = 0;
  int samples_per_class = 0;
  int dim = 0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

std::pair<EmbeddingSet, LabelAssignment> generate_synthetic(
    const SynthSpec& spec);

}  // namespace graphrefine

#endif  // GRAPHREFINE_EMBEDDING_H_

// include/graphrefine/kmeans.h

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

#ifndef GRAPHREFINE_KMEANS_H_
#define GRAPHREFINE_KMEANS_H_

#include <cstdint>

#include "graphrefine/embedding.h"
#include "graphrefine/labels.h"

namespace graphrefine {

/// Baseline Lloyd k-means for the evaluation harness: k distinct random
/// rows as initial centers, iterate to convergence or max_iters.
/// Deterministic per seed. Not part of the refinement pipeline.
LabelAssignment kmeans_baseline(const EmbeddingSet& e, int k,
                                std::uint64_t seed, int max_iters = 100);

}  // namespace graphrefine

#endif  // GRAPHREFINE_KMEANS_H_

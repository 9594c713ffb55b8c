// src/kmeans.cc

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

#include "graphrefine/kmeans.h"

#include <limits>
#include <random>
#include <set>

namespace graphrefine {

LabelAssignment kmeans_baseline(const EmbeddingSet& e, int k,
                                std::uint64_t seed, int max_iters) {
  const std::int64_t n = e.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must satisfy 1 <= k <= n, got " + std::to_string(k));
  }
  if (max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  const int d = e.dim();
  Eigen::MatrixXd points = e.rows().cast<double>();

  // k distinct random rows as initial centers.
  std::mt19937_64 rng(mix_seed(seed, 0x6b6dULL));
  std::uniform_int_distribution<std::int64_t> uni(0, n - 1);
  std::set<std::int64_t> picked;
  Eigen::MatrixXd centers(k, d);
  while (static_cast<int>(picked.size()) < k) {
    const std::int64_t id = uni(rng);
    if (picked.insert(id).second) {
      centers.row(static_cast<std::int64_t>(picked.size()) - 1) =
          points.row(id);
    }
  }

  std::vector<std::int64_t> assign(static_cast<std::size_t>(n), -1);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dist = (points.row(i) - centers.row(c)).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;

    centers.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t c = assign[static_cast<std::size_t>(i)];
      centers.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) /=
            static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: reseed on a random point.
        centers.row(c) = points.row(uni(rng));
      }
    }
  }
  return LabelAssignment(std::move(assign)).compact();
}

}  // namespace graphrefine

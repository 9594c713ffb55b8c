// src/scoring.cc

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

#include "graphrefine/scoring.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace graphrefine {

namespace {

/// Union-find with path compression and union by size; labeling order is
/// deterministic because merges happen in edge order and roots resolve to
/// the smallest member at extraction.
class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::int64_t{0});
  }

  std::int64_t find(std::int64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> size_;
};

void check_pair(const SimilarityGraph& g, std::int64_t i, std::int64_t j) {
  if (i < 0 || j < 0 || i >= g.num_nodes() || j >= g.num_nodes()) {
    throw Error(ErrorCode::kOutOfRange,
                "node pair (" + std::to_string(i) + "," + std::to_string(j) +
                    ") outside 0.." + std::to_string(g.num_nodes() - 1));
  }
  if (i == j) {
    throw Error(ErrorCode::kInvalidArgument,
                "node pair must be distinct, got i = j = " + std::to_string(i));
  }
}

// Sums over the sorted-list intersection of N(i) and N(j) in one pass.
// Excluding i and j themselves is implicit: neighbor lists carry no
// self-loops, so i can only appear in N(j) and j in N(i).
struct CommonSums {
  std::int64_t count = 0;
  double sum_i = 0.0;        // sum_k S(i,k)
  double sum_j = 0.0;        // sum_k S(j,k)
  double sum_product = 0.0;  // sum_k S(i,k) * S(j,k)
};

CommonSums common_sums(const SimilarityGraph& g, std::int64_t i,
                       std::int64_t j) {
  const auto& ni = g.neighbors(i);
  const auto& nj = g.neighbors(j);
  CommonSums sums;
  std::size_t a = 0, b = 0;
  while (a < ni.size() && b < nj.size()) {
    if (ni[a].id < nj[b].id) {
      ++a;
    } else if (ni[a].id > nj[b].id) {
      ++b;
    } else {
      if (ni[a].id != i && ni[a].id != j) {
        ++sums.count;
        sums.sum_i += ni[a].similarity;
        sums.sum_j += nj[b].similarity;
        sums.sum_product += ni[a].similarity * nj[b].similarity;
      }
      ++a;
      ++b;
    }
  }
  return sums;
}

}  // namespace

std::string to_string(ScoringMethod method) {
  switch (method) {
    case ScoringMethod::kProduct: return "product";
    case ScoringMethod::kSum: return "sum";
    case ScoringMethod::kWeighted: return "weighted";
    case ScoringMethod::kGcnWeighted: return "gcn_weighted";
  }
  return "unknown";
}

ScoringMethod scoring_method_from_string(const std::string& name) {
  if (name == "product") return ScoringMethod::kProduct;
  if (name == "sum") return ScoringMethod::kSum;
  if (name == "weighted") return ScoringMethod::kWeighted;
  if (name == "gcn_weighted") return ScoringMethod::kGcnWeighted;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scoring method '" + name + "'");
}

std::vector<std::int64_t> common_neighbors(const SimilarityGraph& g,
                                           std::int64_t i, std::int64_t j) {
  check_pair(g, i, j);
  const auto& ni = g.neighbors(i);
  const auto& nj = g.neighbors(j);
  std::vector<std::int64_t> out;
  std::size_t a = 0, b = 0;
  while (a < ni.size() && b < nj.size()) {
    if (ni[a].id < nj[b].id) {
      ++a;
    } else if (ni[a].id > nj[b].id) {
      ++b;
    } else {
      if (ni[a].id != i && ni[a].id != j) out.push_back(ni[a].id);
      ++a;
      ++b;
    }
  }
  return out;
}

EdgeScore score_edge(const SimilarityGraph& g, std::int64_t i, std::int64_t j,
                     ScoringMethod method) {
  check_pair(g, i, j);
  EdgeScore score;
  score.i = i;
  score.j = j;
  score.raw = g.similarity(i, j);  // throws kEdgeMissing for absent edges

  const CommonSums sums = common_sums(g, i, j);
  if (sums.count > 0) {
    score.alpha_i =
        static_cast<double>(sums.count) / static_cast<double>(g.degree(i));
    score.alpha_j =
        static_cast<double>(sums.count) / static_cast<double>(g.degree(j));
  }
  switch (method) {
    case ScoringMethod::kProduct:
      score.common_score = sums.sum_product;
      break;
    case ScoringMethod::kSum:
      score.common_score = sums.sum_i + sums.sum_j;
      break;
    case ScoringMethod::kWeighted:
    case ScoringMethod::kGcnWeighted:
      score.common_score =
          score.alpha_i * sums.sum_i + score.alpha_j * sums.sum_j;
      break;
  }
  return score;
}

std::vector<EdgeScore> score_all_edges(const SimilarityGraph& g,
                                       ScoringMethod method) {
  std::vector<EdgeScore> scores;
  scores.reserve(static_cast<std::size_t>(g.num_edges()));
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.id > i) scores.push_back(score_edge(g, i, nb.id, method));
    }
  }
  return scores;
}

LabelAssignment cluster_by_threshold(const SimilarityGraph& g,
                                     ScoringMethod method,
                                     double score_threshold) {
  UnionFind uf(g.num_nodes());
  for (const EdgeScore& s : score_all_edges(g, method)) {
    if (s.common_score >= score_threshold) uf.unite(s.i, s.j);
  }
  // Dense component ids by ascending smallest member: the first node seen
  // for a root is that component's smallest member.
  std::vector<std::int64_t> labels(static_cast<std::size_t>(g.num_nodes()));
  std::map<std::int64_t, std::int64_t> root_to_label;
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    auto [it, fresh] = root_to_label.try_emplace(
        uf.find(i), static_cast<std::int64_t>(root_to_label.size()));
    labels[static_cast<std::size_t>(i)] = it->second;
  }
  return LabelAssignment(std::move(labels));
}

LabelAssignment select_reliable_classes(const LabelAssignment& labels,
                                        const SimilarityGraph& g,
                                        double target_fraction,
                                        std::int64_t min_size,
                                        ScoringMethod method) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "target_fraction must lie in (0, 1], got " +
                    std::to_string(target_fraction));
  }
  if (labels.size() != g.num_nodes()) {
    throw Error(ErrorCode::kLengthMismatch,
                "labels cover " + std::to_string(labels.size()) +
                    " samples but the graph has " +
                    std::to_string(g.num_nodes()) + " nodes");
  }

  // Mean intra-class edge score per class; classes without intra edges
  // rank last among survivors.
  std::map<std::int64_t, double> score_sum;
  std::map<std::int64_t, std::int64_t> edge_count;
  for (const EdgeScore& s : score_all_edges(g, method)) {
    if (!labels.is_assigned(s.i) || !labels.is_assigned(s.j)) continue;
    if (labels.label(s.i) != labels.label(s.j)) continue;
    score_sum[labels.label(s.i)] += s.common_score;
    ++edge_count[labels.label(s.i)];
  }

  struct Ranked {
    std::int64_t id;
    double quality;
    std::int64_t size;
  };
  std::vector<Ranked> ranked;
  for (const auto& [id, size] : labels.cluster_sizes()) {
    if (size < min_size) continue;
    const auto it = edge_count.find(id);
    const double quality =
        it == edge_count.end() ? 0.0
                               : score_sum[id] / static_cast<double>(it->second);
    ranked.push_back({id, quality, size});
  }
  if (ranked.empty()) {
    throw Error(ErrorCode::kEmptySelection,
                "no class reaches min_size " + std::to_string(min_size));
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.quality != b.quality) return a.quality > b.quality;
    return a.id < b.id;
  });

  const double target = target_fraction * static_cast<double>(labels.size());
  std::int64_t kept_samples = 0;
  std::vector<std::int64_t> kept_ids;
  for (const Ranked& r : ranked) {
    kept_ids.push_back(r.id);
    kept_samples += r.size;
    if (static_cast<double>(kept_samples) >= target) break;
  }

  std::vector<std::int64_t> out(static_cast<std::size_t>(labels.size()),
                                LabelAssignment::kUnassigned);
  std::set<std::int64_t> kept(kept_ids.begin(), kept_ids.end());
  for (std::int64_t i = 0; i < labels.size(); ++i) {
    if (labels.is_assigned(i) && kept.count(labels.label(i))) {
      out[static_cast<std::size_t>(i)] = labels.label(i);
    }
  }
  return LabelAssignment(std::move(out));
}

void save_scores_csv(const std::vector<EdgeScore>& scores,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << "src,dst,raw,common_score\n";
  char buffer[96];
  for (const EdgeScore& s : scores) {
    std::snprintf(buffer, sizeof(buffer), "%lld,%lld,%.6f,%.6f",
                  static_cast<long long>(s.i), static_cast<long long>(s.j),
                  s.raw, s.common_score);
    out << buffer << '\n';
  }
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

}  // namespace graphrefine

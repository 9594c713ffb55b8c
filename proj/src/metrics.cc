// src/metrics.cc

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

#include "graphrefine/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace graphrefine {

namespace {

// Entropy of a partition from its cluster counts. Counts are sorted first
// so the result depends only on the multiset of counts; this makes nmi
// bitwise invariant under relabeling and exact on identical partitions.
double entropy_from_counts(std::vector<std::int64_t> counts, double n) {
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  for (std::int64_t c : counts) {
    double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<std::int64_t> require_assigned(const LabelAssignment& a,
                                           const char* side) {
  std::vector<std::int64_t> labels = a.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == LabelAssignment::kUnassigned) {
      throw Error(ErrorCode::kUnassignedLabel,
                  std::string(side) + " assignment has UNASSIGNED at sample " +
                      std::to_string(i));
    }
  }
  return labels;
}

}  // namespace

double nmi(const LabelAssignment& a, const LabelAssignment& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "assignments cover " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + " samples");
  }
  if (a.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty assignments");
  }
  std::vector<std::int64_t> la = require_assigned(a, "first");
  std::vector<std::int64_t> lb = require_assigned(b, "second");

  const double n = static_cast<double>(la.size());
  std::map<std::int64_t, std::int64_t> ca, cb;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint;
  for (std::size_t i = 0; i < la.size(); ++i) {
    ++ca[la[i]];
    ++cb[lb[i]];
    ++joint[{la[i], lb[i]}];
  }
  auto values = [](const auto& m) {
    std::vector<std::int64_t> v;
    v.reserve(m.size());
    for (const auto& [key, count] : m) v.push_back(count);
    return v;
  };
  const double ha = entropy_from_counts(values(ca), n);
  const double hb = entropy_from_counts(values(cb), n);
  const double hab = entropy_from_counts(values(joint), n);

  if (ha == 0.0 && hb == 0.0) return 1.0;  // both single-cluster partitions
  const double normalizer = (ha + hb) / 2.0;
  if (normalizer == 0.0) return 0.0;
  const double mi = ha + hb - hab;
  return std::clamp(mi / normalizer, 0.0, 1.0);
}

EdgeMetrics edge_metrics(const std::vector<Edge>& predicted,
                         const std::vector<Edge>& candidates,
                         const LabelAssignment& truth) {
  auto check = [&](const Edge& e) {
    if (e.a < 0 || e.b >= truth.size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                      ") outside 0.." + std::to_string(truth.size() - 1));
    }
    if (!truth.is_assigned(e.a) || !truth.is_assigned(e.b)) {
      throw Error(ErrorCode::kUnassignedLabel,
                  "truth labels must be fully assigned");
    }
  };
  EdgeMetrics m;
  for (const Edge& e : predicted) {
    check(e);
    ++m.predicted;
    m.true_positives += (truth.label(e.a) == truth.label(e.b));
  }
  for (const Edge& e : candidates) {
    check(e);
    m.positive_candidates += (truth.label(e.a) == truth.label(e.b));
  }
  if (m.predicted > 0) {
    m.precision = static_cast<double>(m.true_positives) /
                  static_cast<double>(m.predicted);
  }
  if (m.positive_candidates > 0) {
    m.recall = static_cast<double>(m.true_positives) /
               static_cast<double>(m.positive_candidates);
  }
  return m;
}

}  // namespace graphrefine

// include/graphrefine/labels.h

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

#ifndef GRAPHREFINE_LABELS_H_
#define GRAPHREFINE_LABELS_H_

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "graphrefine/common.h"

namespace graphrefine {

/// Per-sample cluster assignment. Samples dropped from a selection carry
/// the UNASSIGNED sentinel; metric operations reject it explicitly.
class LabelAssignment {
 public:
  static constexpr std::int64_t kUnassigned =
      std::numeric_limits<std::int64_t>::max();

  LabelAssignment() = default;
  explicit LabelAssignment(std::vector<std::int64_t> labels);

  std::int64_t size() const { return static_cast<std::int64_t>(labels_.size()); }
  std::int64_t label(std::int64_t i) const { return labels_[i]; }
  const std::vector<std::int64_t>& labels() const { return labels_; }

  bool is_assigned(std::int64_t i) const { return labels_[i] != kUnassigned; }
  std::int64_t num_assigned() const;
  std::int64_t num_unassigned() const { return size() - num_assigned(); }

  /// Count of distinct assigned cluster ids.
  std::int64_t num_clusters() const;

  /// Sizes of assigned clusters, keyed by cluster id.
  std::map<std::int64_t, std::int64_t> cluster_sizes() const;

  /// Remaps assigned ids to dense 0..num_clusters-1 in order of first
  /// appearance. UNASSIGNED entries are left untouched.
  LabelAssignment compact() const;

  /// True when assigned ids are exactly 0..num_clusters-1.
  bool is_compact() const;

  bool operator==(const LabelAssignment& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::int64_t> labels_;
};

// Labels CSV: UTF-8, header "index,label", one row per sample, integer
// label or -1 for unassigned.
void save_labels_csv(const LabelAssignment& labels, const std::string& path);
LabelAssignment load_labels_csv(const std::string& path);

}  // namespace graphrefine

#endif  // GRAPHREFINE_LABELS_H_

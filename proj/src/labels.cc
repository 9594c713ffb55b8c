// src/labels.cc

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

#include "graphrefine/labels.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace graphrefine {

LabelAssignment::LabelAssignment(std::vector<std::int64_t> labels)
    : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 && labels_[i] != kUnassigned) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative cluster id at sample " + std::to_string(i));
    }
  }
}

std::int64_t LabelAssignment::num_assigned() const {
  std::int64_t count = 0;
  for (std::int64_t l : labels_) count += (l != kUnassigned);
  return count;
}

std::int64_t LabelAssignment::num_clusters() const {
  return static_cast<std::int64_t>(cluster_sizes().size());
}

std::map<std::int64_t, std::int64_t> LabelAssignment::cluster_sizes() const {
  std::map<std::int64_t, std::int64_t> sizes;
  for (std::int64_t l : labels_) {
    if (l != kUnassigned) ++sizes[l];
  }
  return sizes;
}

LabelAssignment LabelAssignment::compact() const {
  std::unordered_map<std::int64_t, std::int64_t> remap;
  std::vector<std::int64_t> out(labels_.size(), kUnassigned);
  std::int64_t next = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == kUnassigned) continue;
    auto [it, fresh] = remap.try_emplace(labels_[i], next);
    if (fresh) ++next;
    out[i] = it->second;
  }
  return LabelAssignment(std::move(out));
}

bool LabelAssignment::is_compact() const {
  auto sizes = cluster_sizes();
  std::int64_t expect = 0;
  for (const auto& [id, count] : sizes) {
    if (id != expect++) return false;
  }
  return true;
}

void save_labels_csv(const LabelAssignment& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << "index,label\n";
  for (std::int64_t i = 0; i < labels.size(); ++i) {
    out << i << ','
        << (labels.is_assigned(i) ? labels.label(i) : std::int64_t{-1})
        << '\n';
  }
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

LabelAssignment load_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "index,label") {
    throw Error(ErrorCode::kBadMagic,
                path + " does not start with the index,label header");
  }
  std::vector<std::int64_t> labels;
  std::int64_t expected_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::int64_t index = 0, label = 0;
    char comma = 0;
    if (!(row >> index >> comma >> label) || comma != ',') {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": malformed row '" + line + "'");
    }
    if (index != expected_index) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": expected index " + std::to_string(expected_index) +
                      ", found " + std::to_string(index));
    }
    ++expected_index;
    if (label < -1) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ": negative label " + std::to_string(label));
    }
    labels.push_back(label == -1 ? LabelAssignment::kUnassigned : label);
  }
  return LabelAssignment(std::move(labels));
}

}  // namespace graphrefine

// src/config.cc

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

#include "graphrefine/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace graphrefine {

using nlohmann::json;

namespace {

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["k_graph"] = cfg.k_graph;
  j["prune_threshold"] = cfg.prune_threshold;
  j["scoring_method"] = to_string(cfg.scoring_method);
  j["score_threshold"] = cfg.score_threshold;
  j["target_fraction"] = cfg.target_fraction;
  j["min_class_size"] = cfg.min_class_size;
  j["gcn_dims"] = cfg.gcn_dims;
  j["n1"] = cfg.n1;
  j["n2"] = cfg.n2;
  j["k_sub"] = cfg.k_sub;
  j["epochs"] = cfg.epochs;
  j["learning_rate"] = cfg.learning_rate;
  if (cfg.neg_weight.has_value()) {
    j["neg_weight"] = *cfg.neg_weight;
  } else {
    j["neg_weight"] = "auto";
  }
  j["p_cut"] = cfg.p_cut;
  j["iterations"] = cfg.iterations;
  j["ablation_ks"] = cfg.ablation_ks;
  j["seed"] = cfg.seed;
  return j;
}

void apply_json(PipelineConfig& cfg, const json& j) {
  static const std::set<std::string> known = {
      "k_graph",       "prune_threshold", "scoring_method", "score_threshold",
      "target_fraction", "min_class_size", "gcn_dims",      "n1",
      "n2",            "k_sub",           "epochs",         "learning_rate",
      "neg_weight",    "p_cut",           "iterations",     "ablation_ks",
      "seed"};
  if (!j.is_object()) {
    throw Error(ErrorCode::kBadConfig, "config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kBadConfig, "unknown config key '" + key + "'");
    }
  }
  try {
    if (j.contains("k_graph")) cfg.k_graph = j.at("k_graph").get<int>();
    if (j.contains("prune_threshold")) {
      cfg.prune_threshold = j.at("prune_threshold").get<double>();
    }
    if (j.contains("scoring_method")) {
      cfg.scoring_method =
          scoring_method_from_string(j.at("scoring_method").get<std::string>());
    }
    if (j.contains("score_threshold")) {
      cfg.score_threshold = j.at("score_threshold").get<double>();
    }
    if (j.contains("target_fraction")) {
      cfg.target_fraction = j.at("target_fraction").get<double>();
    }
    if (j.contains("min_class_size")) {
      cfg.min_class_size = j.at("min_class_size").get<std::int64_t>();
    }
    if (j.contains("gcn_dims")) {
      cfg.gcn_dims = j.at("gcn_dims").get<std::vector<int>>();
    }
    if (j.contains("n1")) cfg.n1 = j.at("n1").get<int>();
    if (j.contains("n2")) cfg.n2 = j.at("n2").get<int>();
    if (j.contains("k_sub")) cfg.k_sub = j.at("k_sub").get<int>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("learning_rate")) {
      cfg.learning_rate = j.at("learning_rate").get<double>();
    }
    if (j.contains("neg_weight")) {
      const json& w = j.at("neg_weight");
      if (w.is_string() && w.get<std::string>() == "auto") {
        cfg.neg_weight.reset();
      } else if (w.is_number()) {
        cfg.neg_weight = w.get<double>();
      } else {
        throw Error(ErrorCode::kBadConfig,
                    "neg_weight must be a number or \"auto\"");
      }
    }
    if (j.contains("p_cut")) cfg.p_cut = j.at("p_cut").get<double>();
    if (j.contains("iterations")) {
      cfg.iterations = j.at("iterations").get<int>();
    }
    if (j.contains("ablation_ks")) {
      cfg.ablation_ks = j.at("ablation_ks").get<std::vector<int>>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  cfg.validate();
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::kBadConfig, message);
  };
  if (k_graph < 1) fail("k_graph must be >= 1");
  if (!std::isfinite(prune_threshold)) fail("prune_threshold must be finite");
  if (!std::isfinite(score_threshold)) fail("score_threshold must be finite");
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    fail("target_fraction must lie in (0, 1]");
  }
  if (min_class_size < 1) fail("min_class_size must be >= 1");
  if (gcn_dims.empty()) fail("gcn_dims must list at least one layer");
  for (int d : gcn_dims) {
    if (d < 1) fail("gcn_dims entries must be positive");
  }
  if (n1 < 1 || n2 < 1 || k_sub < 1) fail("n1, n2, k_sub must be >= 1");
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be finite and >= 0");
  }
  if (neg_weight.has_value() && !(*neg_weight > 0.0)) {
    fail("neg_weight must be > 0 (or \"auto\")");
  }
  if (!(p_cut >= 0.0) || !std::isfinite(p_cut)) {
    fail("p_cut must be finite and >= 0");
  }
  if (iterations < 0) fail("iterations must be >= 0");
  if (ablation_ks.empty()) fail("ablation_ks must list at least one K");
  for (int k : ablation_ks) {
    if (k < 1) fail("ablation_ks entries must be >= 1");
  }
}

std::string PipelineConfig::to_json() const {
  return config_to_json(*this).dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  PipelineConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

void PipelineConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << to_json();
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

void PipelineConfig::apply_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kBadConfig,
                "--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // plain string fallback, e.g. scoring_method=weighted
  }
  apply_json(*this, json{{key, value}});
}

}  // namespace graphrefine

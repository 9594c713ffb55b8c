// src/pipeline.cc

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

#include "graphrefine/pipeline.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "graphrefine/kmeans.h"
#include "graphrefine/metrics.h"
#include "graphrefine/scoring.h"

namespace graphrefine {

using nlohmann::json;

namespace {

// Runs a stage and tags any failure with the stage name, so pipeline
// errors always say where they happened.
template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("[") + name + "] " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("[") + name + "] " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

json iteration_to_json(const IterationReport& it) {
  json j;
  j["iteration"] = it.iteration;
  j["num_clusters"] = it.num_clusters;
  j["num_edges"] = it.num_edges;
  if (it.nmi_vs_truth) j["nmi_vs_truth"] = *it.nmi_vs_truth;
  if (it.edge_precision) j["edge_precision"] = *it.edge_precision;
  if (it.edge_recall) j["edge_recall"] = *it.edge_recall;
  if (it.iteration > 0) {
    j["retained_classes"] = it.retained_classes;
    j["retained_samples"] = it.retained_samples;
    j["gcn_skipped"] = it.gcn_skipped;
    j["loss_trace"] = it.loss_trace;
  }
  return j;
}

struct IterationStats {
  std::int64_t num_edges;
  std::optional<double> nmi_vs_truth;
  std::optional<double> edge_precision;
  std::optional<double> edge_recall;
};

IterationStats iteration_stats(const SimilarityGraph& current,
                               const std::vector<Edge>& candidates,
                               const LabelAssignment& labels,
                               const std::optional<LabelAssignment>& truth) {
  IterationStats stats{current.num_edges(), std::nullopt, std::nullopt,
                       std::nullopt};
  if (truth.has_value()) {
    stats.nmi_vs_truth = nmi(labels, *truth);
    const EdgeMetrics em = edge_metrics(current.edges(), candidates, *truth);
    stats.edge_precision = em.precision;
    stats.edge_recall = em.recall;
  }
  return stats;
}

std::string labels_file(int iteration) {
  return "labels_iter" + std::to_string(iteration) + ".csv";
}

}  // namespace

double quantize_similarity(double s) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", s);
  return std::strtod(buffer, nullptr);
}

SimilarityGraph quantize_graph(const SimilarityGraph& g) {
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> edges;
  edges.reserve(static_cast<std::size_t>(g.num_edges()));
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.id > i) edges.emplace_back(i, nb.id, quantize_similarity(nb.similarity));
    }
  }
  return SimilarityGraph::from_edges(g.num_nodes(), edges);
}

GcnModel quantize_model(const GcnModel& model) {
  GcnModel out = model;
  Eigen::VectorXd params = model.flatten();
  for (Eigen::Index t = 0; t < params.size(); ++t) {
    params[t] = static_cast<double>(static_cast<float>(params[t]));
  }
  out.unflatten(params);
  return out;
}

std::string RunReport::to_json() const {
  json j;
  j["config"] = json::parse(config.to_json());
  j["num_samples"] = num_samples;
  j["dim"] = dim;
  j["truth_provided"] = truth_provided;
  j["iterations"] = json::array();
  for (const IterationReport& it : iterations) {
    j["iterations"].push_back(iteration_to_json(it));
  }
  return j.dump(2) + "\n";
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "pseudo-label refinement report\n"
      << "embeddings stay fixed across iterations: each iteration re-prunes\n"
      << "the original KNN graph with a freshly trained edge classifier and\n"
      << "re-clusters; no encoder retraining happens here.\n\n";
  out << "samples: " << num_samples << "  dim: " << dim
      << "  seed: " << config.seed << "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-5s %-9s %-9s %-10s %-10s %-10s %s\n",
                "iter", "clusters", "edges", "nmi", "edge_prec", "edge_rec",
                "final_loss");
  out << line;
  for (const IterationReport& it : iterations) {
    auto fmt = [](const std::optional<double>& v) {
      char buf[32];
      if (v.has_value()) {
        std::snprintf(buf, sizeof(buf), "%.4f", *v);
      } else {
        std::snprintf(buf, sizeof(buf), "-");
      }
      return std::string(buf);
    };
    std::string final_loss = "-";
    if (!it.loss_trace.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", it.loss_trace.back());
      final_loss = buf;
    } else if (it.iteration > 0 && it.gcn_skipped) {
      final_loss = "(skipped)";
    }
    std::snprintf(line, sizeof(line), "%-5d %-9lld %-9lld %-10s %-10s %-10s %s\n",
                  it.iteration, static_cast<long long>(it.num_clusters),
                  static_cast<long long>(it.num_edges),
                  fmt(it.nmi_vs_truth).c_str(), fmt(it.edge_precision).c_str(),
                  fmt(it.edge_recall).c_str(), final_loss.c_str());
    out << line;
  }
  return out.str();
}

RunReport run_pipeline(const PipelineConfig& config,
                       const EmbeddingSet& embeddings,
                       const std::optional<LabelAssignment>& truth,
                       const std::string& run_dir) {
  config.validate();
  if (truth.has_value() && truth->size() != embeddings.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "truth labels cover " + std::to_string(truth->size()) +
                    " samples, embeddings " + std::to_string(embeddings.size()));
  }
  const bool writing = !run_dir.empty();
  if (writing) {
    std::filesystem::create_directories(run_dir);
    config.save(run_dir + "/config.json");
  }

  RunReport report;
  report.config = config;
  report.num_samples = embeddings.size();
  report.dim = embeddings.dim();
  report.truth_provided = truth.has_value();

  const EmbeddingSet e = stage("normalize", [&] { return normalize(embeddings); });

  // Everything downstream consumes the quantized graph, which is exactly
  // what graph.csv stores; a resumed run sees identical state.
  const SimilarityGraph g_full = stage("graph-build", [&] {
    return quantize_graph(build_graph(e, config.k_graph,
                                      config.prune_threshold));
  });
  if (writing) save_graph_csv(g_full, run_dir + "/graph.csv");
  const std::vector<Edge> candidate_edges = g_full.edges();

  LabelAssignment labels = stage("cluster", [&] {
    return cluster_by_threshold(g_full, config.scoring_method,
                                config.score_threshold);
  });
  if (writing) save_labels_csv(labels, run_dir + "/" + labels_file(0));

  {
    IterationReport it;
    it.iteration = 0;
    it.num_clusters = labels.num_clusters();
    const IterationStats stats =
        iteration_stats(g_full, candidate_edges, labels, truth);
    it.num_edges = stats.num_edges;
    it.nmi_vs_truth = stats.nmi_vs_truth;
    it.edge_precision = stats.edge_precision;
    it.edge_recall = stats.edge_recall;
    report.iterations.push_back(std::move(it));
  }

  for (int iter = 1; iter <= config.iterations; ++iter) {
    IterationReport it;
    it.iteration = iter;

    const LabelAssignment selected = stage("select", [&] {
      return select_reliable_classes(labels, g_full, config.target_fraction,
                                     config.min_class_size,
                                     config.scoring_method);
    });
    const auto selected_sizes = selected.cluster_sizes();
    it.retained_classes = static_cast<std::int64_t>(selected_sizes.size());
    it.retained_samples = selected.num_assigned();

    TrainConfig tc;
    tc.n1 = std::min<int>(config.n1,
                          static_cast<int>(selected_sizes.size()));
    tc.n2 = config.n2;
    tc.k_sub = config.k_sub;
    tc.epochs = config.epochs;
    tc.learning_rate = config.learning_rate;
    tc.neg_weight = config.neg_weight;
    tc.seed = mix_seed(config.seed, static_cast<std::uint64_t>(iter));
    if (tc.n1 < config.n1) {
      std::cerr << "warning: iteration " << iter << " clamps n1 to "
                << tc.n1 << " (only " << selected_sizes.size()
                << " retained classes)\n";
    }

    std::vector<Subgraph> subgraphs = stage("sample", [&] {
      std::vector<Subgraph> out;
      for (const auto& [cls, size] : selected_sizes) {
        out.push_back(sample_subgraph(e, selected, tc, cls));
      }
      return out;
    });

    bool trainable = false;
    for (const Subgraph& sg : subgraphs) {
      if (sg.positive_edges() > 0 && sg.negative_edges() > 0) {
        trainable = true;
        break;
      }
    }

    SimilarityGraph current = g_full;
    if (!trainable) {
      // Degenerate pseudo-labels (e.g. zero-noise data where subgraphs
      // carry one polarity only): keep the graph as is and re-cluster.
      it.gcn_skipped = true;
      std::cerr << "warning: iteration " << iter
                << " has no trainable subgraph, skipping edge classifier\n";
      labels = stage("refine", [&] {
        return cluster_by_threshold(g_full, ScoringMethod::kWeighted,
                                    config.score_threshold);
      });
    } else {
      std::vector<int> dims;
      dims.push_back(e.dim());
      dims.insert(dims.end(), config.gcn_dims.begin(), config.gcn_dims.end());
      const GcnModel initial = GcnModel::random_init(
          dims, mix_seed(config.seed, static_cast<std::uint64_t>(iter),
                         0x6d6f64656cULL));
      const TrainResult trained = stage("gcn-train", [&] {
        return train(initial, subgraphs, tc);
      });
      it.loss_trace = trained.loss_trace;
      const GcnModel model = quantize_model(trained.model);
      if (writing) {
        save_model(model, run_dir + "/gcn_iter" + std::to_string(iter) + ".bin");
      }
      const InferResult pruned = stage("gcn-infer", [&] {
        return infer_prune(model, g_full, e, config.p_cut);
      });
      current = pruned.graph;
      labels = stage("refine", [&] {
        return cluster_by_threshold(current, ScoringMethod::kWeighted,
                                    config.score_threshold);
      });
    }
    if (writing) save_labels_csv(labels, run_dir + "/" + labels_file(iter));

    it.num_clusters = labels.num_clusters();
    const IterationStats stats =
        iteration_stats(current, candidate_edges, labels, truth);
    it.num_edges = stats.num_edges;
    it.nmi_vs_truth = stats.nmi_vs_truth;
    it.edge_precision = stats.edge_precision;
    it.edge_recall = stats.edge_recall;
    report.iterations.push_back(std::move(it));
  }

  if (writing) {
    write_text_file(run_dir + "/report.json", report.to_json());
    write_text_file(run_dir + "/report.txt", report.to_text());
  }
  return report;
}

std::string AblationReport::to_csv() const {
  std::ostringstream out;
  out << "method,k,clusters,nmi\n";
  char line[96];
  for (const AblationRow& row : rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%lld,%.6f",
                  row.method.c_str(),
                  row.k.has_value() ? std::to_string(*row.k).c_str() : "-",
                  static_cast<long long>(row.num_clusters), row.nmi_vs_truth);
    out << line << '\n';
  }
  return out.str();
}

std::string AblationReport::to_text() const {
  std::ostringstream out;
  char line[96];
  std::snprintf(line, sizeof(line), "%-14s %-6s %-9s %s\n", "method", "K",
                "clusters", "NMI");
  out << line;
  for (const AblationRow& row : rows) {
    std::snprintf(line, sizeof(line), "%-14s %-6s %-9lld %.4f\n",
                  row.method.c_str(),
                  row.k.has_value() ? std::to_string(*row.k).c_str() : "-",
                  static_cast<long long>(row.num_clusters), row.nmi_vs_truth);
    out << line;
  }
  return out.str();
}

AblationReport run_ablation(const PipelineConfig& config,
                            const EmbeddingSet& embeddings,
                            const LabelAssignment& truth,
                            const std::string& out_dir) {
  config.validate();
  if (truth.size() != embeddings.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "truth labels and embeddings cover different sample counts");
  }
  AblationReport report;
  report.config = config;
  const EmbeddingSet e = stage("normalize", [&] { return normalize(embeddings); });

  // K-means baseline with the true cluster count given explicitly.
  {
    const LabelAssignment km = stage("kmeans", [&] {
      return kmeans_baseline(e, static_cast<int>(truth.num_clusters()),
                             config.seed);
    });
    report.rows.push_back(
        {"kmeans", std::nullopt, km.num_clusters(), nmi(km, truth)});
  }

  // Common-neighbor scoring variants on the k_graph KNN graph.
  const SimilarityGraph g_base = stage("graph-build", [&] {
    return quantize_graph(build_graph(e, config.k_graph,
                                      config.prune_threshold));
  });
  for (ScoringMethod method : {ScoringMethod::kProduct, ScoringMethod::kSum,
                               ScoringMethod::kWeighted}) {
    const LabelAssignment labels = stage("cluster", [&] {
      return cluster_by_threshold(g_base, method, config.score_threshold);
    });
    report.rows.push_back({to_string(method), config.k_graph,
                           labels.num_clusters(), nmi(labels, truth)});
  }

  // GCN-refined variant across the K sweep.
  for (int k : config.ablation_ks) {
    const SimilarityGraph g = (k == config.k_graph)
        ? g_base
        : stage("graph-build", [&] {
            return quantize_graph(build_graph(e, k, config.prune_threshold));
          });
    const LabelAssignment initial = stage("cluster", [&] {
      return cluster_by_threshold(g, ScoringMethod::kWeighted,
                                  config.score_threshold);
    });
    const LabelAssignment selected = stage("select", [&] {
      return select_reliable_classes(initial, g, config.target_fraction,
                                     config.min_class_size,
                                     ScoringMethod::kWeighted);
    });
    const auto sizes = selected.cluster_sizes();

    TrainConfig tc;
    tc.n1 = std::min<int>(config.n1, static_cast<int>(sizes.size()));
    tc.n2 = config.n2;
    tc.k_sub = config.k_sub;
    tc.epochs = config.epochs;
    tc.learning_rate = config.learning_rate;
    tc.neg_weight = config.neg_weight;
    tc.seed = mix_seed(config.seed, static_cast<std::uint64_t>(k));

    std::vector<Subgraph> subgraphs = stage("sample", [&] {
      std::vector<Subgraph> out;
      for (const auto& [cls, size] : sizes) {
        out.push_back(sample_subgraph(e, selected, tc, cls));
      }
      return out;
    });
    bool trainable = false;
    for (const Subgraph& sg : subgraphs) {
      if (sg.positive_edges() > 0 && sg.negative_edges() > 0) {
        trainable = true;
        break;
      }
    }
    LabelAssignment refined = initial;
    if (trainable) {
      std::vector<int> dims;
      dims.push_back(e.dim());
      dims.insert(dims.end(), config.gcn_dims.begin(), config.gcn_dims.end());
      const GcnModel initial_model = GcnModel::random_init(
          dims, mix_seed(config.seed, static_cast<std::uint64_t>(k),
                         0x6d6f64656cULL));
      const TrainResult trained = stage("gcn-train", [&] {
        return train(initial_model, subgraphs, tc);
      });
      refined = stage("refine", [&] {
        return refine(quantize_model(trained.model), g, e, config.p_cut,
                      config.score_threshold);
      });
    }
    report.rows.push_back({"gcn_weighted", k, refined.num_clusters(),
                           nmi(refined, truth)});
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/ablation.csv", report.to_csv());
    write_text_file(out_dir + "/ablation.txt", report.to_text());
  }
  return report;
}

}  // namespace graphrefine

// tools/graphrefine_main.cc

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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphrefine/config.h"
#include "graphrefine/dino.h"
#include "graphrefine/embedding.h"
#include "graphrefine/gcn.h"
#include "graphrefine/graph.h"
#include "graphrefine/kmeans.h"
#include "graphrefine/labels.h"
#include "graphrefine/metrics.h"
#include "graphrefine/pipeline.h"
#include "graphrefine/scoring.h"

namespace {

using namespace graphrefine;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "run";
};

void add_common(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_path, "pipeline config JSON");
  cmd->add_option("--set", opts->overrides,
                  "config override key=value (repeatable)");
  cmd->add_option("--seed", opts->seed, "run seed (overrides the config)");
  cmd->add_option("--out", opts->out_dir, "output directory");
}

PipelineConfig resolve_config(const CommonOptions& opts) {
  PipelineConfig cfg;
  if (!opts.config_path.empty()) cfg = PipelineConfig::load(opts.config_path);
  for (const std::string& assignment : opts.overrides) {
    cfg.apply_override(assignment);
  }
  if (opts.seed.has_value()) cfg.seed = *opts.seed;
  cfg.validate();
  return cfg;
}

std::string timestamp_tag() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buffer[32];
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &tm_utc);
  return buffer;
}

EmbeddingSet load_normalized(const std::string& path) {
  return normalize(load_embeddings(path));
}

int cmd_synth(const SynthSpec& spec, const std::string& out_emb,
              const std::string& out_labels) {
  auto [embeddings, labels] = generate_synthetic(spec);
  save_embeddings(embeddings, out_emb);
  save_labels_csv(labels, out_labels);
  std::cout << "wrote " << embeddings.size() << " x " << embeddings.dim()
            << " embeddings to " << out_emb << " and labels to " << out_labels
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"similarity-graph pseudo-label refinement pipeline"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic embeddings");
  SynthSpec synth_spec;
  std::string synth_emb = "synth.emb", synth_labels = "synth_labels.csv";
  synth->add_option("--classes", synth_spec.num_classes, "number of classes")
      ->required();
  synth->add_option("--per-class", synth_spec.samples_per_class,
                    "samples per class")
      ->required();
  synth->add_option("--dim", synth_spec.dim, "embedding dimension")->required();
  synth->add_option("--sigma", synth_spec.noise_sigma,
                    "per-component noise scale");
  synth->add_option("--seed", synth_spec.seed, "generator seed");
  synth->add_option("--out-emb", synth_emb, "embedding output path");
  synth->add_option("--out-labels", synth_labels, "labels output path");

  // graph build
  auto* graph = app.add_subcommand("graph", "similarity graph operations");
  auto* graph_build = graph->add_subcommand("build", "build the KNN graph");
  CommonOptions graph_opts;
  std::string graph_emb, graph_out = "graph.csv";
  add_common(graph_build, &graph_opts);
  graph_build->add_option("--emb", graph_emb, "EMB1 embedding file")
      ->required();
  graph_build->add_option("--graph-out", graph_out, "graph CSV output path");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "threshold clustering");
  CommonOptions cluster_opts;
  std::string cluster_emb, cluster_graph, cluster_out = "labels.csv";
  add_common(cluster, &cluster_opts);
  cluster->add_option("--emb", cluster_emb, "EMB1 embedding file (fixes n)")
      ->required();
  cluster->add_option("--graph", cluster_graph, "graph CSV")->required();
  cluster->add_option("--labels-out", cluster_out, "labels CSV output path");

  // gcn train / infer
  auto* gcn = app.add_subcommand("gcn", "edge classifier operations");
  auto* gcn_train = gcn->add_subcommand("train", "train on reliable classes");
  CommonOptions train_opts;
  std::string train_emb, train_graph, train_labels, train_model = "gcn.bin";
  add_common(gcn_train, &train_opts);
  gcn_train->add_option("--emb", train_emb, "EMB1 embedding file")->required();
  gcn_train->add_option("--graph", train_graph, "graph CSV")->required();
  gcn_train->add_option("--labels", train_labels, "pseudo-label CSV")
      ->required();
  gcn_train->add_option("--model-out", train_model, "checkpoint output path");

  auto* gcn_infer = gcn->add_subcommand("infer", "prune edges with a model");
  CommonOptions infer_opts;
  std::string infer_emb, infer_graph, infer_model;
  std::string infer_out = "pruned.csv", infer_report = "edge_report.csv";
  add_common(gcn_infer, &infer_opts);
  gcn_infer->add_option("--emb", infer_emb, "EMB1 embedding file")->required();
  gcn_infer->add_option("--graph", infer_graph, "graph CSV")->required();
  gcn_infer->add_option("--model", infer_model, "GCN1 checkpoint")->required();
  gcn_infer->add_option("--graph-out", infer_out, "pruned graph CSV");
  gcn_infer->add_option("--report", infer_report, "edge probability CSV");

  // refine
  auto* refine_cmd = app.add_subcommand(
      "refine", "prune with a model and re-cluster");
  CommonOptions refine_opts;
  std::string refine_emb, refine_graph, refine_model;
  std::string refine_out = "labels_refined.csv";
  add_common(refine_cmd, &refine_opts);
  refine_cmd->add_option("--emb", refine_emb, "EMB1 embedding file")
      ->required();
  refine_cmd->add_option("--graph", refine_graph, "graph CSV")->required();
  refine_cmd->add_option("--model", refine_model, "GCN1 checkpoint")
      ->required();
  refine_cmd->add_option("--labels-out", refine_out, "labels CSV output path");

  // pipeline run
  auto* pipeline = app.add_subcommand("pipeline", "end-to-end runs");
  auto* pipeline_run = pipeline->add_subcommand("run", "full refinement loop");
  CommonOptions pipeline_opts;
  std::string pipeline_emb, pipeline_truth, pipeline_run_dir;
  add_common(pipeline_run, &pipeline_opts);
  pipeline_run->add_option("--emb", pipeline_emb, "EMB1 embedding file")
      ->required();
  pipeline_run->add_option("--truth", pipeline_truth,
                           "ground-truth labels CSV (optional)");
  pipeline_run->add_option("--run-dir", pipeline_run_dir,
                           "exact run directory (default <out>/<time>-<seed>)");

  // ablation
  auto* ablation = app.add_subcommand("ablation", "method comparison table");
  CommonOptions ablation_opts;
  std::string ablation_emb, ablation_truth;
  add_common(ablation, &ablation_opts);
  ablation->add_option("--emb", ablation_emb, "EMB1 embedding file")
      ->required();
  ablation->add_option("--truth", ablation_truth, "ground-truth labels CSV")
      ->required();

  // dino-demo
  auto* dino_demo = app.add_subcommand("dino-demo",
                                       "toy self-distillation training loop");
  DinoDemoConfig demo_cfg;
  dino_demo->add_option("--steps", demo_cfg.steps, "training steps");
  dino_demo->add_option("--lr", demo_cfg.learning_rate, "learning rate");
  dino_demo->add_option("--seed", demo_cfg.seed, "run seed");

  // eval nmi / eval edges
  auto* eval = app.add_subcommand("eval", "metric evaluation");
  auto* eval_nmi = eval->add_subcommand("nmi", "NMI between two label files");
  std::string nmi_a, nmi_b;
  eval_nmi->add_option("--a", nmi_a, "labels CSV")->required();
  eval_nmi->add_option("--b", nmi_b, "labels CSV")->required();
  auto* eval_edges = eval->add_subcommand(
      "edges", "edge precision/recall of a pruned graph");
  std::string edges_predicted, edges_candidates, edges_truth;
  eval_edges->add_option("--predicted", edges_predicted, "pruned graph CSV")
      ->required();
  eval_edges->add_option("--candidates", edges_candidates,
                         "candidate graph CSV")
      ->required();
  eval_edges->add_option("--truth", edges_truth, "ground-truth labels CSV")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_spec, synth_emb, synth_labels);
    }
    if (graph_build->parsed()) {
      const PipelineConfig cfg = resolve_config(graph_opts);
      const EmbeddingSet e = load_normalized(graph_emb);
      const SimilarityGraph g =
          quantize_graph(build_graph(e, cfg.k_graph, cfg.prune_threshold));
      save_graph_csv(g, graph_out);
      std::cout << "wrote " << g.num_edges() << " edges over "
                << g.num_nodes() << " nodes to " << graph_out << "\n";
      return 0;
    }
    if (cluster->parsed()) {
      const PipelineConfig cfg = resolve_config(cluster_opts);
      const EmbeddingSet e = load_normalized(cluster_emb);
      const SimilarityGraph g = load_graph_csv(cluster_graph, e.size());
      const LabelAssignment labels =
          cluster_by_threshold(g, cfg.scoring_method, cfg.score_threshold);
      save_labels_csv(labels, cluster_out);
      std::cout << "wrote " << labels.num_clusters() << " clusters to "
                << cluster_out << "\n";
      return 0;
    }
    if (gcn_train->parsed()) {
      const PipelineConfig cfg = resolve_config(train_opts);
      const EmbeddingSet e = load_normalized(train_emb);
      const SimilarityGraph g = load_graph_csv(train_graph, e.size());
      const LabelAssignment labels = load_labels_csv(train_labels);
      const LabelAssignment selected = select_reliable_classes(
          labels, g, cfg.target_fraction, cfg.min_class_size,
          cfg.scoring_method);
      const auto sizes = selected.cluster_sizes();
      TrainConfig tc;
      tc.n1 = std::min<int>(cfg.n1, static_cast<int>(sizes.size()));
      tc.n2 = cfg.n2;
      tc.k_sub = cfg.k_sub;
      tc.epochs = cfg.epochs;
      tc.learning_rate = cfg.learning_rate;
      tc.neg_weight = cfg.neg_weight;
      tc.seed = cfg.seed;
      std::vector<Subgraph> subgraphs;
      for (const auto& [cls, size] : sizes) {
        subgraphs.push_back(sample_subgraph(e, selected, tc, cls));
      }
      std::vector<int> dims;
      dims.push_back(e.dim());
      dims.insert(dims.end(), cfg.gcn_dims.begin(), cfg.gcn_dims.end());
      const TrainResult result =
          train(GcnModel::random_init(dims, mix_seed(cfg.seed, 0x6d6f64656cULL)),
                subgraphs, tc);
      save_model(quantize_model(result.model), train_model);
      std::cout << "trained on " << result.used_subgraphs
                << " subgraphs; final loss "
                << result.loss_trace.back() << "; wrote " << train_model
                << "\n";
      return 0;
    }
    if (gcn_infer->parsed()) {
      const PipelineConfig cfg = resolve_config(infer_opts);
      const EmbeddingSet e = load_normalized(infer_emb);
      const SimilarityGraph g = load_graph_csv(infer_graph, e.size());
      const GcnModel model = load_model(infer_model);
      const InferResult result = infer_prune(model, g, e, cfg.p_cut);
      save_graph_csv(result.graph, infer_out);
      save_edge_report_csv(result.report, infer_report);
      std::cout << "kept " << result.graph.num_edges() << " of "
                << g.num_edges() << " edges; wrote " << infer_out << " and "
                << infer_report << "\n";
      return 0;
    }
    if (refine_cmd->parsed()) {
      const PipelineConfig cfg = resolve_config(refine_opts);
      const EmbeddingSet e = load_normalized(refine_emb);
      const SimilarityGraph g = load_graph_csv(refine_graph, e.size());
      const GcnModel model = load_model(refine_model);
      const LabelAssignment labels =
          refine(model, g, e, cfg.p_cut, cfg.score_threshold);
      save_labels_csv(labels, refine_out);
      std::cout << "wrote " << labels.num_clusters() << " refined clusters to "
                << refine_out << "\n";
      return 0;
    }
    if (pipeline_run->parsed()) {
      const PipelineConfig cfg = resolve_config(pipeline_opts);
      const EmbeddingSet e = load_embeddings(pipeline_emb);
      std::optional<LabelAssignment> truth;
      if (!pipeline_truth.empty()) truth = load_labels_csv(pipeline_truth);
      std::string run_dir = pipeline_run_dir;
      if (run_dir.empty()) {
        run_dir = pipeline_opts.out_dir + "/" + timestamp_tag() + "-" +
                  std::to_string(cfg.seed);
      }
      const RunReport report = run_pipeline(cfg, e, truth, run_dir);
      std::cout << report.to_text() << "\nrun directory: " << run_dir << "\n";
      return 0;
    }
    if (ablation->parsed()) {
      const PipelineConfig cfg = resolve_config(ablation_opts);
      const EmbeddingSet e = load_embeddings(ablation_emb);
      const LabelAssignment truth = load_labels_csv(ablation_truth);
      const AblationReport report =
          run_ablation(cfg, e, truth, ablation_opts.out_dir);
      std::cout << report.to_text();
      return 0;
    }
    if (dino_demo->parsed()) {
      const std::vector<double> trace = run_dino_demo(demo_cfg);
      for (std::size_t step = 0; step < trace.size(); ++step) {
        std::printf("step %4zu  loss %.6f\n", step, trace[step]);
      }
      std::printf("initial %.6f -> final %.6f\n", trace.front(),
                  trace.back());
      return 0;
    }
    if (eval_nmi->parsed()) {
      const double score = nmi(load_labels_csv(nmi_a), load_labels_csv(nmi_b));
      std::printf("nmi %.6f\n", score);
      return 0;
    }
    if (eval_edges->parsed()) {
      const SimilarityGraph predicted = load_graph_csv(edges_predicted);
      const LabelAssignment truth = load_labels_csv(edges_truth);
      const SimilarityGraph candidates =
          load_graph_csv(edges_candidates, truth.size());
      const EdgeMetrics m =
          edge_metrics(predicted.edges(), candidates.edges(), truth);
      std::printf("precision %s\nrecall %s\n",
                  m.precision ? std::to_string(*m.precision).c_str() : "none",
                  m.recall ? std::to_string(*m.recall).c_str() : "none");
      return 0;
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

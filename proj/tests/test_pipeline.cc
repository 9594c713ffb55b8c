// tests/test_pipeline.cc

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "graphrefine/embedding.h"
#include "graphrefine/gcn.h"
#include "graphrefine/pipeline.h"

using namespace graphrefine;

namespace {

std::string temp_dir(const std::string& name) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("graphrefine_pipe_" + std::to_string(getpid()) + "_" +
               std::to_string(counter++) + "_" + name);
  std::filesystem::create_directories(path);
  return path.string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

PipelineConfig small_config() {
  PipelineConfig cfg;
  cfg.k_graph = 10;
  cfg.min_class_size = 5;
  cfg.gcn_dims = {16, 16};
  cfg.n1 = 3;
  cfg.n2 = 10;
  cfg.k_sub = 5;
  cfg.epochs = 8;
  cfg.iterations = 2;
  cfg.target_fraction = 0.5;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("zero-noise data clusters perfectly and stays stable") {
  SynthSpec spec{6, 12, 16, 0.0, 3};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.iterations = 2;
  const RunReport report = run_pipeline(cfg, e, truth);
  REQUIRE(report.iterations.size() == 3);
  for (const IterationReport& it : report.iterations) {
    CHECK(it.nmi_vs_truth.value() == 1.0);
    CHECK(it.num_clusters == 6);
  }
}

TEST_CASE("zero iterations reports only the initial clustering") {
  SynthSpec spec{5, 10, 8, 0.15, 9};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.iterations = 0;
  const RunReport report = run_pipeline(cfg, e, truth);
  CHECK(report.iterations.size() == 1);
  CHECK(report.iterations[0].iteration == 0);
  CHECK(report.iterations[0].nmi_vs_truth.has_value());
}

TEST_CASE("reports omit truth metrics when no truth is given") {
  SynthSpec spec{4, 10, 8, 0.1, 13};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.iterations = 1;
  const RunReport report = run_pipeline(cfg, e, std::nullopt);
  for (const IterationReport& it : report.iterations) {
    CHECK_FALSE(it.nmi_vs_truth.has_value());
    CHECK_FALSE(it.edge_precision.has_value());
  }
  CHECK(report.to_json().find("nmi") == std::string::npos);
}

TEST_CASE("two runs with the same seed produce byte-identical reports") {
  SynthSpec spec{8, 15, 12, 0.25, 21};
  auto [e, truth] = generate_synthetic(spec);
  const PipelineConfig cfg = small_config();
  const std::string dir_a = temp_dir("run_a");
  const std::string dir_b = temp_dir("run_b");
  run_pipeline(cfg, e, truth, dir_a);
  run_pipeline(cfg, e, truth, dir_b);
  const std::string report_a = read_text(dir_a + "/report.json");
  CHECK(report_a == read_text(dir_b + "/report.json"));
  CHECK(read_text(dir_a + "/graph.csv") == read_text(dir_b + "/graph.csv"));
  CHECK(!report_a.empty());
}

TEST_CASE("run artifacts reload and resume to identical labels") {
  SynthSpec spec{8, 15, 12, 0.25, 33};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.iterations = 1;
  const std::string dir = temp_dir("resume");
  const RunReport report = run_pipeline(cfg, e, truth, dir);
  REQUIRE(report.iterations.size() == 2);
  REQUIRE_FALSE(report.iterations[1].gcn_skipped);

  // resume the final stage from the serialized artifacts alone
  const EmbeddingSet normalized = normalize(e);
  const SimilarityGraph g = load_graph_csv(dir + "/graph.csv", e.size());
  const GcnModel model = load_model(dir + "/gcn_iter1.bin");
  const LabelAssignment resumed =
      refine(model, g, normalized, cfg.p_cut, cfg.score_threshold);
  const LabelAssignment stored = load_labels_csv(dir + "/labels_iter1.csv");
  CHECK(resumed == stored);

  // the written artifact set matches the documented layout
  CHECK(std::filesystem::exists(dir + "/config.json"));
  CHECK(std::filesystem::exists(dir + "/labels_iter0.csv"));
  CHECK(std::filesystem::exists(dir + "/report.txt"));
}

TEST_CASE("ablation on zero-noise data scores 1.0 for every method") {
  SynthSpec spec{5, 12, 16, 0.0, 41};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.ablation_ks = {5, 10};
  const AblationReport report = run_ablation(cfg, e, truth);
  REQUIRE(report.rows.size() == 6);  // kmeans + 3 methods + 2 Ks
  for (const AblationRow& row : report.rows) {
    if (row.method == "kmeans") continue;  // random init, no guarantee
    CHECK(row.nmi_vs_truth == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::string csv = report.to_csv();
  CHECK(csv.find("method,k,clusters,nmi") == 0);
  CHECK(csv.find("gcn_weighted") != std::string::npos);
}

TEST_CASE("pipeline reports edge metrics against the initial graph") {
  SynthSpec spec{6, 12, 12, 0.3, 55};
  auto [e, truth] = generate_synthetic(spec);
  PipelineConfig cfg = small_config();
  cfg.iterations = 1;
  const RunReport report = run_pipeline(cfg, e, truth);
  const IterationReport& initial = report.iterations[0];
  CHECK(initial.edge_precision.has_value());
  CHECK(initial.edge_recall.value() == doctest::Approx(1.0));
  const IterationReport& refined = report.iterations[1];
  CHECK(refined.edge_recall.value() <= 1.0);
  if (!refined.gcn_skipped) {
    CHECK_FALSE(refined.loss_trace.empty());
  }
}

TEST_CASE("pipeline failures carry the stage name") {
  RowMatrixF rows(3, 2);
  rows << 1.f, 0.f, 0.f, 1.f, 0.5f, 0.5f;
  const EmbeddingSet tiny(std::move(rows));
  PipelineConfig cfg = small_config();
  cfg.k_graph = 50;  // k >= n
  try {
    run_pipeline(cfg, tiny, std::nullopt);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("[graph-build]") != std::string::npos);
  }
}

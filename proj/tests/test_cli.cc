// tests/test_cli.cc
//
// End-to-end smoke tests driving the installed binary through the same
// entry points a user would.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "graphrefine/labels.h"

using namespace graphrefine;

namespace {

std::string work_dir() {
  static std::string dir = [] {
    auto path = std::filesystem::temp_directory_path() /
                ("graphrefine_cli_" + std::to_string(getpid()));
    std::filesystem::create_directories(path);
    return path.string();
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string command =
      std::string(GRAPHREFINE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(command.c_str());
}

// Later cases reuse the synth output; regenerate it if a case runs alone.
void ensure_data() {
  const std::string d = work_dir();
  if (std::filesystem::exists(d + "/x.emb")) return;
  REQUIRE(run("synth --classes 6 --per-class 15 --dim 12 --sigma 0.2 --seed 3"
              " --out-emb " + d + "/x.emb --out-labels " + d + "/truth.csv") ==
          0);
}

}  // namespace

TEST_CASE("cli drives synth, graph, cluster, train, refine, and eval") {
  const std::string d = work_dir();
  REQUIRE(run("synth --classes 6 --per-class 15 --dim 12 --sigma 0.2 --seed 3"
              " --out-emb " + d + "/x.emb --out-labels " + d + "/truth.csv") == 0);
  REQUIRE(std::filesystem::exists(d + "/x.emb"));

  REQUIRE(run("graph build --emb " + d + "/x.emb --graph-out " + d +
              "/graph.csv --set k_graph=8 --set prune_threshold=0.3") == 0);
  REQUIRE(run("cluster --emb " + d + "/x.emb --graph " + d +
              "/graph.csv --labels-out " + d + "/labels.csv") == 0);
  REQUIRE(run("gcn train --emb " + d + "/x.emb --graph " + d +
              "/graph.csv --labels " + d + "/labels.csv --model-out " + d +
              "/gcn.bin --set min_class_size=5 --set target_fraction=0.6"
              " --set gcn_dims=[16,16] --set epochs=5 --set n1=3 --set n2=10"
              " --set k_sub=5 --seed 9") == 0);
  REQUIRE(run("gcn infer --emb " + d + "/x.emb --graph " + d +
              "/graph.csv --model " + d + "/gcn.bin --graph-out " + d +
              "/pruned.csv --report " + d + "/edges.csv") == 0);
  REQUIRE(run("refine --emb " + d + "/x.emb --graph " + d +
              "/graph.csv --model " + d + "/gcn.bin --labels-out " + d +
              "/refined.csv") == 0);
  REQUIRE(run("eval nmi --a " + d + "/refined.csv --b " + d + "/truth.csv") ==
          0);
  REQUIRE(run("eval edges --predicted " + d + "/pruned.csv --candidates " + d +
              "/graph.csv --truth " + d + "/truth.csv") == 0);

  // artifacts parse back through the library loaders
  CHECK(load_labels_csv(d + "/refined.csv").size() == 90);
}

TEST_CASE("cli pipeline run writes the run directory layout") {
  const std::string d = work_dir();
  ensure_data();
  REQUIRE(run("pipeline run --emb " + d + "/x.emb --truth " + d +
              "/truth.csv --run-dir " + d + "/run1 --set k_graph=8"
              " --set min_class_size=5 --set gcn_dims=[16,16]"
              " --set epochs=5 --set n1=3 --set n2=10 --set k_sub=5"
              " --set iterations=1 --set target_fraction=0.6 --seed 4") == 0);
  CHECK(std::filesystem::exists(d + "/run1/config.json"));
  CHECK(std::filesystem::exists(d + "/run1/graph.csv"));
  CHECK(std::filesystem::exists(d + "/run1/labels_iter0.csv"));
  CHECK(std::filesystem::exists(d + "/run1/labels_iter1.csv"));
  CHECK(std::filesystem::exists(d + "/run1/report.json"));
  CHECK(std::filesystem::exists(d + "/run1/report.txt"));
}

TEST_CASE("cli dino demo runs and ablation emits its table") {
  const std::string d = work_dir();
  ensure_data();
  REQUIRE(run("dino-demo --steps 20 --seed 2") == 0);
  REQUIRE(run("ablation --emb " + d + "/x.emb --truth " + d +
              "/truth.csv --out " + d + "/abl --set ablation_ks=[4,8]"
              " --set k_graph=8 --set min_class_size=5 --set gcn_dims=[16,16]"
              " --set epochs=5 --set n1=3 --set n2=10 --set k_sub=5"
              " --set target_fraction=0.6 --seed 6") == 0);
  CHECK(std::filesystem::exists(d + "/abl/ablation.csv"));
  CHECK(std::filesystem::exists(d + "/abl/ablation.txt"));
}

TEST_CASE("cli fails loudly on bad inputs") {
  const std::string d = work_dir();
  ensure_data();
  CHECK(run("graph build --emb " + d + "/missing.emb") != 0);
  CHECK(run("eval nmi --a " + d + "/missing.csv --b " + d + "/missing.csv") !=
        0);
  CHECK(run("pipeline run --emb " + d + "/x.emb --set bogus_key=1") != 0);
  CHECK(run("cluster --graph " + d + "/graph.csv") != 0);  // missing --emb
}

// tests/test_graph.cc

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "graphrefine/embedding.h"
#include "graphrefine/graph.h"
#include "oracles.h"

using namespace graphrefine;

namespace {

std::string temp_path(const std::string& name) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          ("graphrefine_g_" + std::to_string(getpid()) + "_" +
           std::to_string(counter++) + "_" + name))
      .string();
}

EmbeddingSet random_unit_embeddings(std::int64_t n, int d,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrixF rows(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int t = 0; t < d; ++t) rows(i, t) = static_cast<float>(gauss(rng));
  }
  return normalize(EmbeddingSet(std::move(rows)));
}

// Three unit vectors realizing a given Gram matrix, via a tiny Cholesky.
EmbeddingSet from_gram3(double c01, double c02, double c12) {
  Eigen::Matrix3d gram;
  gram << 1, c01, c02, c01, 1, c12, c02, c12, 1;
  Eigen::LLT<Eigen::Matrix3d> llt(gram);
  REQUIRE(llt.info() == Eigen::Success);
  Eigen::Matrix3d l = llt.matrixL();
  RowMatrixF rows = l.cast<float>();
  return normalize(EmbeddingSet(std::move(rows)));
}

void check_graph_invariants(const SimilarityGraph& g, const EmbeddingSet& e) {
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    std::int64_t prev = -1;
    for (const Neighbor& nb : g.neighbors(i)) {
      CHECK(nb.id != i);        // no self-loops
      CHECK(nb.id > prev);       // sorted, no duplicates
      prev = nb.id;
      CHECK(nb.similarity >= -1.0 - 1e-9);
      CHECK(nb.similarity <= 1.0 + 1e-9);
      CHECK(g.similarity(nb.id, i) == nb.similarity);  // symmetric
      const double expected =
          e.rows().row(i).cast<double>().dot(e.rows().row(nb.id).cast<double>());
      CHECK(nb.similarity == doctest::Approx(expected).epsilon(1e-6));
    }
    CHECK(g.degree(i) == static_cast<std::int64_t>(g.neighbors(i).size()));
  }
}

}  // namespace

TEST_CASE("knn on three points with known cosines picks the closest partner") {
  // pairwise cosines 0.99 / 0.50 / 0.49: node 2 prefers node 0 over node 1
  const EmbeddingSet e = from_gram3(0.99, 0.50, 0.49);
  const auto knn = knn_search(e, 1);
  CHECK(knn[0] == std::vector<std::int64_t>{1});
  CHECK(knn[1] == std::vector<std::int64_t>{0});
  CHECK(knn[2] == std::vector<std::int64_t>{0});
  CHECK(knn == testing::brute_force_knn(e, 1));
}

TEST_CASE("knn with two nodes links them both ways") {
  const EmbeddingSet e = random_unit_embeddings(2, 4, 11);
  const auto knn = knn_search(e, 1);
  CHECK(knn[0] == std::vector<std::int64_t>{1});
  CHECK(knn[1] == std::vector<std::int64_t>{0});
}

TEST_CASE("duplicate rows become mutual nearest neighbors") {
  RowMatrixF rows(3, 2);
  rows << 1.0f, 0.0f, 1.0f, 0.0f, 0.0f, 1.0f;
  const EmbeddingSet e(std::move(rows));
  const auto knn = knn_search(e, 1);
  CHECK(knn[0] == std::vector<std::int64_t>{1});
  CHECK(knn[1] == std::vector<std::int64_t>{0});  // tie broken by lower id
}

TEST_CASE("knn rejects k out of range and non-normalized input") {
  const EmbeddingSet e = random_unit_embeddings(5, 4, 3);
  CHECK_THROWS_AS(knn_search(e, 5), Error);
  CHECK_THROWS_AS(knn_search(e, 0), Error);
  RowMatrixF rows(2, 2);
  rows << 3.0f, 0.0f, 0.0f, 1.0f;
  CHECK_THROWS_AS(knn_search(EmbeddingSet(std::move(rows)), 1), Error);
}

TEST_CASE("knn matches the brute-force oracle exactly across sizes") {
  for (const auto& [n, k] : std::vector<std::pair<int, int>>{
           {10, 1}, {10, 5}, {100, 5}, {100, 50}, {300, 7}}) {
    const EmbeddingSet e =
        random_unit_embeddings(n, 8, static_cast<std::uint64_t>(n * 31 + k));
    CHECK(knn_search(e, k) == testing::brute_force_knn(e, k));
  }
}

TEST_CASE("build_graph separates distant classes at a high threshold") {
  // two tight clusters around orthogonal centers; cross-class cosine ~ 0
  SynthSpec spec{2, 5, 16, 0.05, 5};
  auto [e, labels] = generate_synthetic(spec);
  const SimilarityGraph g = build_graph(e, 4, 0.5);
  check_graph_invariants(g, e);
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      CHECK(labels.label(i) == labels.label(nb.id));  // no cross edges
    }
  }
}

TEST_CASE("threshold below range keeps the union graph, above empties it") {
  const EmbeddingSet e = random_unit_embeddings(12, 6, 17);
  const SimilarityGraph full = build_graph(e, 3, -1.0);
  CHECK(full.num_edges() >= 12 * 3 / 2);  // union keeps every directed edge
  const SimilarityGraph empty = build_graph(e, 3, 1.0 + 1e-9);
  CHECK(empty.num_edges() == 0);
  CHECK(empty.num_nodes() == 12);
}

TEST_CASE("build_graph output is symmetric and duplicate-free on random data") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const EmbeddingSet e = random_unit_embeddings(60, 8, seed);
    const SimilarityGraph g = build_graph(e, 7, 0.1);
    check_graph_invariants(g, e);
  }
}

TEST_CASE("mutual symmetrization keeps a subset of the union graph") {
  const EmbeddingSet e = random_unit_embeddings(40, 6, 23);
  const SimilarityGraph u = build_graph(e, 5, -1.0);
  GraphBuildOptions opts;
  opts.symmetrize = Symmetrize::kMutual;
  const SimilarityGraph m = build_graph(e, 5, -1.0, opts);
  CHECK(m.num_edges() <= u.num_edges());
  for (const Edge& edge : m.edges()) {
    CHECK(u.has_edge(edge.a, edge.b));
  }
}

TEST_CASE("normalized adjacency on a single edge and a path") {
  const SimilarityGraph pair = SimilarityGraph::from_edges(2, {{0, 1, 0.9}});
  const NormalizedAdjacency a = normalized_adjacency(pair);
  REQUIRE(a.row(0).size() == 1);
  CHECK(a.row(0)[0].similarity == doctest::Approx(1.0));
  CHECK(a.row(1)[0].similarity == doctest::Approx(1.0));

  const SimilarityGraph path =
      SimilarityGraph::from_edges(3, {{0, 1, 0.8}, {1, 2, 0.7}});
  const NormalizedAdjacency ap = normalized_adjacency(path);
  CHECK(ap.row(0)[0].similarity ==
        doctest::Approx(0.7071067811865475).epsilon(1e-12));
  const NormalizedAdjacency apw =
      normalized_adjacency(path, false, /*weighted=*/true);
  CHECK(apw.row(0)[0].similarity ==
        doctest::Approx(0.8 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("isolated nodes contribute no normalized adjacency entries") {
  const SimilarityGraph g = SimilarityGraph::from_edges(3, {{0, 1, 0.5}});
  const NormalizedAdjacency a = normalized_adjacency(g);
  CHECK(a.row(2).empty());
  const NormalizedAdjacency with_loops = normalized_adjacency(g, true);
  REQUIRE(with_loops.row(2).size() == 1);
  CHECK(with_loops.row(2)[0].id == 2);
  CHECK(with_loops.row(2)[0].similarity == doctest::Approx(1.0));
}

TEST_CASE("normalized adjacency spectrum stays within [-1, 1]") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const EmbeddingSet e = random_unit_embeddings(40 + 2 * seed, 6, seed + 50);
    const SimilarityGraph g = build_graph(e, 5, 0.0);
    const NormalizedAdjacency a = normalized_adjacency(g);
    CHECK(testing::max_abs_eigenvalue(a) <= 1.0 + 1e-9);
  }
}

TEST_CASE("remove_edges drops both directions and updates degrees") {
  const SimilarityGraph pair = SimilarityGraph::from_edges(2, {{0, 1, 0.4}});
  const SimilarityGraph cleared = remove_edges(pair, {{0, 1}});
  CHECK(cleared.num_edges() == 0);
  CHECK(cleared.degree(0) == 0);
  CHECK(cleared.degree(1) == 0);

  CHECK(remove_edges(pair, {}) == pair);

  // handshake count on a random graph
  const EmbeddingSet e = random_unit_embeddings(20, 6, 77);
  const SimilarityGraph g = build_graph(e, 4, -1.0);
  const auto edges = g.edges();
  REQUIRE(edges.size() >= 3);
  const std::vector<Edge> victims(edges.begin(), edges.begin() + 3);
  const SimilarityGraph reduced = remove_edges(g, victims);
  std::int64_t before = 0, after = 0;
  for (std::int64_t i = 0; i < 20; ++i) {
    before += g.degree(i);
    after += reduced.degree(i);
  }
  CHECK(before - after == 6);
}

TEST_CASE("removing an absent edge is an error") {
  const SimilarityGraph pair = SimilarityGraph::from_edges(3, {{0, 1, 0.4}});
  try {
    remove_edges(pair, {{0, 2}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEdgeMissing);
  }
}

TEST_CASE("graph CSV round trip preserves the quantized graph") {
  const EmbeddingSet e = random_unit_embeddings(25, 5, 91);
  const SimilarityGraph g = build_graph(e, 4, 0.0);
  const std::string path = temp_path("graph.csv");
  save_graph_csv(g, path);
  const SimilarityGraph loaded = load_graph_csv(path, 25);
  CHECK(loaded.num_nodes() == 25);
  CHECK(loaded.num_edges() == g.num_edges());
  for (const Edge& edge : g.edges()) {
    CHECK(loaded.similarity(edge.a, edge.b) ==
          doctest::Approx(g.similarity(edge.a, edge.b)).epsilon(1e-6));
  }
  // a second write/load cycle is exact
  const std::string path2 = temp_path("graph2.csv");
  save_graph_csv(loaded, path2);
  CHECK(load_graph_csv(path2, 25) == loaded);
}

TEST_CASE("graph CSV loader validates structure") {
  const std::string path = temp_path("bad.csv");
  {
    std::ofstream out(path);
    out << "src,dst,similarity\n3,1,0.5\n";  // src >= dst
  }
  CHECK_THROWS_AS(load_graph_csv(path), Error);
  {
    std::ofstream out(path);
    out << "src,dst,similarity\n0,1,0.5\n0,1,0.5\n";  // duplicate
  }
  CHECK_THROWS_AS(load_graph_csv(path), Error);
  {
    std::ofstream out(path);
    out << "src,dst,similarity\n0,1,7.5\n";  // out of range similarity
  }
  CHECK_THROWS_AS(load_graph_csv(path), Error);
}

// tests/test_scoring.cc

#include <doctest.h>

#include <random>

#include "graphrefine/embedding.h"
#include "graphrefine/scoring.h"
#include "oracles.h"

using namespace graphrefine;

namespace {

SimilarityGraph random_graph(std::int64_t n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrixF rows(n, 8);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int t = 0; t < 8; ++t) rows(i, t) = static_cast<float>(gauss(rng));
  }
  return build_graph(normalize(EmbeddingSet(std::move(rows))), k, -1.0);
}

}  // namespace

TEST_CASE("common neighbors on hand-built graphs") {
  const SimilarityGraph triangle = SimilarityGraph::from_edges(
      3, {{0, 1, 0.9}, {1, 2, 0.8}, {0, 2, 0.7}});
  CHECK(common_neighbors(triangle, 0, 1) == std::vector<std::int64_t>{2});

  const SimilarityGraph path =
      SimilarityGraph::from_edges(3, {{0, 1, 0.9}, {1, 2, 0.8}});
  CHECK(common_neighbors(path, 0, 2) == std::vector<std::int64_t>{1});

  const SimilarityGraph disjoint =
      SimilarityGraph::from_edges(4, {{0, 1, 0.9}, {2, 3, 0.8}});
  CHECK(common_neighbors(disjoint, 0, 2).empty());

  CHECK_THROWS_AS(common_neighbors(triangle, 0, 9), Error);
  CHECK_THROWS_AS(common_neighbors(triangle, 1, 1), Error);
}

TEST_CASE("edge scoring reproduces hand-evaluated values") {
  // N(0) = {1, 2}; N(1) = {0, 2, 3, 4}; common neighborhood = {2}
  // S(0,2) = 0.9, S(1,2) = 0.8
  const SimilarityGraph g = SimilarityGraph::from_edges(
      5,
      {{0, 1, 0.5}, {0, 2, 0.9}, {1, 2, 0.8}, {1, 3, 0.3}, {1, 4, 0.2}});

  const EdgeScore weighted = score_edge(g, 0, 1, ScoringMethod::kWeighted);
  CHECK(weighted.alpha_i == doctest::Approx(0.5));
  CHECK(weighted.alpha_j == doctest::Approx(0.25));
  CHECK(weighted.common_score == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(weighted.raw == doctest::Approx(0.5));

  CHECK(score_edge(g, 0, 1, ScoringMethod::kProduct).common_score ==
        doctest::Approx(0.72).epsilon(1e-12));
  CHECK(score_edge(g, 0, 1, ScoringMethod::kSum).common_score ==
        doctest::Approx(1.70).epsilon(1e-12));
  // the GCN-flavored variant scores identically on a bare graph
  CHECK(score_edge(g, 0, 1, ScoringMethod::kGcnWeighted).common_score ==
        doctest::Approx(0.65).epsilon(1e-12));
}

TEST_CASE("empty common neighborhood scores zero under every method") {
  const SimilarityGraph g = SimilarityGraph::from_edges(4, {{0, 1, 0.9},
                                                            {2, 3, 0.8}});
  for (auto method : {ScoringMethod::kProduct, ScoringMethod::kSum,
                      ScoringMethod::kWeighted}) {
    const EdgeScore s = score_edge(g, 0, 1, method);
    CHECK(s.common_score == 0.0);
    CHECK(s.alpha_i == 0.0);
    CHECK(s.alpha_j == 0.0);
  }
}

TEST_CASE("scoring a missing edge is an error") {
  const SimilarityGraph g = SimilarityGraph::from_edges(3, {{0, 1, 0.9}});
  try {
    score_edge(g, 0, 2, ScoringMethod::kWeighted);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEdgeMissing);
  }
}

TEST_CASE("edge scores are symmetric in the node pair") {
  const SimilarityGraph g = random_graph(60, 6, 13);
  for (const Edge& edge : g.edges()) {
    for (auto method : {ScoringMethod::kProduct, ScoringMethod::kSum,
                        ScoringMethod::kWeighted}) {
      const EdgeScore ij = score_edge(g, edge.a, edge.b, method);
      const EdgeScore ji = score_edge(g, edge.b, edge.a, method);
      CHECK(ij.common_score == doctest::Approx(ji.common_score).epsilon(1e-12));
    }
  }
}

TEST_CASE("batched scoring equals the literal double-loop oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SimilarityGraph g = random_graph(80 + 15 * seed, 8, seed);
    for (auto method : {ScoringMethod::kProduct, ScoringMethod::kSum,
                        ScoringMethod::kWeighted}) {
      const auto scores = score_all_edges(g, method);
      for (const EdgeScore& s : scores) {
        const double oracle = testing::score_edge_oracle(g, s.i, s.j, method);
        CHECK(std::abs(s.common_score - oracle) < 1e-9);
      }
    }
  }
}

TEST_CASE("threshold clustering separates cliques joined by a weak bridge") {
  // two triangles bridged by one edge with no common neighbors
  const SimilarityGraph g = SimilarityGraph::from_edges(
      6, {{0, 1, 0.9}, {0, 2, 0.9}, {1, 2, 0.9},
          {3, 4, 0.9}, {3, 5, 0.9}, {4, 5, 0.9},
          {2, 3, 0.95}});
  const LabelAssignment labels =
      cluster_by_threshold(g, ScoringMethod::kWeighted, 0.5);
  CHECK(labels.num_clusters() == 2);
  CHECK(labels.label(0) == labels.label(1));
  CHECK(labels.label(0) == labels.label(2));
  CHECK(labels.label(3) == labels.label(4));
  CHECK(labels.label(0) != labels.label(3));
}

TEST_CASE("threshold zero on a connected nonnegative graph yields one cluster") {
  const SimilarityGraph g = SimilarityGraph::from_edges(
      4, {{0, 1, 0.9}, {1, 2, 0.9}, {2, 3, 0.9}, {0, 2, 0.9}, {1, 3, 0.9}});
  const LabelAssignment labels =
      cluster_by_threshold(g, ScoringMethod::kSum, 0.0);
  CHECK(labels.num_clusters() == 1);
}

TEST_CASE("an empty graph leaves every node in its own cluster") {
  const SimilarityGraph g(5);
  const LabelAssignment labels =
      cluster_by_threshold(g, ScoringMethod::kWeighted, 0.5);
  CHECK(labels.num_clusters() == 5);
  for (std::int64_t i = 0; i < 5; ++i) CHECK(labels.label(i) == i);
}

TEST_CASE("raising the threshold never merges clusters") {
  const SimilarityGraph g = random_graph(70, 6, 99);
  std::int64_t previous = 0;
  for (double threshold : {-10.0, 0.0, 0.3, 0.6, 1.0, 5.0, 100.0}) {
    const std::int64_t clusters =
        cluster_by_threshold(g, ScoringMethod::kWeighted, threshold)
            .num_clusters();
    CHECK(clusters >= previous);
    previous = clusters;
  }
}

TEST_CASE("class selection keeps everything at fraction 1") {
  SynthSpec spec{4, 10, 16, 0.1, 3};
  auto [e, truth] = generate_synthetic(spec);
  const SimilarityGraph g = build_graph(e, 5, -1.0);
  const LabelAssignment selected =
      select_reliable_classes(truth, g, 1.0, 1);
  CHECK(selected.num_unassigned() == 0);
  CHECK(selected.labels() == truth.labels());
}

TEST_CASE("class selection keeps the single best quarter out of four") {
  // Four 4-node cliques with distinct edge similarities: class quality
  // ranks 3 > 2 > 1 > 0 by construction.
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> edges;
  std::vector<std::int64_t> labels(16);
  for (int c = 0; c < 4; ++c) {
    const double s = 0.2 + 0.2 * c;
    for (int i = 0; i < 4; ++i) {
      labels[static_cast<std::size_t>(4 * c + i)] = c;
      for (int j = i + 1; j < 4; ++j) {
        edges.emplace_back(4 * c + i, 4 * c + j, s);
      }
    }
  }
  const SimilarityGraph g = SimilarityGraph::from_edges(16, edges);
  const LabelAssignment truth{std::vector<std::int64_t>(labels)};
  const LabelAssignment selected = select_reliable_classes(truth, g, 0.25, 1);
  CHECK(selected.num_assigned() == 4);
  for (std::int64_t i = 0; i < 16; ++i) {
    if (i >= 12) {
      CHECK(selected.label(i) == 3);  // the highest-similarity clique
    } else {
      CHECK_FALSE(selected.is_assigned(i));
    }
  }
}

TEST_CASE("class selection fails when nothing reaches min_size") {
  SynthSpec spec{3, 4, 8, 0.05, 9};
  auto [e, truth] = generate_synthetic(spec);
  const SimilarityGraph g = build_graph(e, 3, -1.0);
  try {
    select_reliable_classes(truth, g, 0.5, 100);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kEmptySelection);
  }
  CHECK_THROWS_AS(select_reliable_classes(truth, g, 0.0, 1), Error);
  CHECK_THROWS_AS(select_reliable_classes(truth, g, 1.5, 1), Error);
}

TEST_CASE("selection is stable under deletion of an unselected sample") {
  // Same four-clique construction; drop one node of the weakest clique and
  // re-run selection on the reduced graph. Retained labels must not move.
  auto build = [](bool drop_last_node) {
    const int n = drop_last_node ? 15 : 16;
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> edges;
    std::vector<std::int64_t> labels;
    std::int64_t next_id = 0;
    std::vector<std::int64_t> ids;
    for (int c = 0; c < 4; ++c) {
      const int size = (c == 0 && drop_last_node) ? 3 : 4;
      const double s = 0.2 + 0.2 * c;
      ids.clear();
      for (int i = 0; i < size; ++i) {
        ids.push_back(next_id++);
        labels.push_back(c);
      }
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          edges.emplace_back(ids[i], ids[j], s);
        }
      }
    }
    return std::pair{SimilarityGraph::from_edges(n, edges),
                     LabelAssignment(std::move(labels))};
  };
  auto [g_full, labels_full] = build(false);
  auto [g_less, labels_less] = build(true);
  const LabelAssignment sel_full =
      select_reliable_classes(labels_full, g_full, 0.25, 1);
  const LabelAssignment sel_less =
      select_reliable_classes(labels_less, g_less, 0.25, 1);
  REQUIRE_FALSE(sel_full.is_assigned(0));  // clique 0 is unselected
  // clique 0 occupies ids [0, 4) in the full graph, [0, 3) in the reduced
  for (std::int64_t i = 4; i < 16; ++i) {
    CHECK(sel_less.is_assigned(i - 1) == sel_full.is_assigned(i));
    if (sel_full.is_assigned(i)) {
      CHECK(sel_less.label(i - 1) == sel_full.label(i));
    }
  }
}

TEST_CASE("scoring method names round trip") {
  for (auto method : {ScoringMethod::kProduct, ScoringMethod::kSum,
                      ScoringMethod::kWeighted, ScoringMethod::kGcnWeighted}) {
    CHECK(scoring_method_from_string(to_string(method)) == method);
  }
  CHECK_THROWS_AS(scoring_method_from_string("bogus"), Error);
}

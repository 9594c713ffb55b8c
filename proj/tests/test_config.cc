// tests/test_config.cc

#include <doctest.h>

#include "graphrefine/config.h"

using namespace graphrefine;

TEST_CASE("default config carries the documented values") {
  PipelineConfig cfg;
  cfg.validate();
  CHECK(cfg.k_graph == 50);
  CHECK(cfg.prune_threshold == 0.5);
  CHECK(cfg.scoring_method == ScoringMethod::kWeighted);
  CHECK(cfg.score_threshold == 0.5);
  CHECK(cfg.target_fraction == 0.25);
  CHECK(cfg.min_class_size == 20);
  CHECK(cfg.gcn_dims == std::vector<int>({256, 256}));
  CHECK(cfg.n1 == 5);
  CHECK(cfg.n2 == 40);
  CHECK(cfg.k_sub == 10);
  CHECK(cfg.epochs == 50);
  CHECK(cfg.learning_rate == 1e-2);
  CHECK_FALSE(cfg.neg_weight.has_value());
  CHECK(cfg.p_cut == 0.5);
  CHECK(cfg.iterations == 3);
  CHECK(cfg.ablation_ks == std::vector<int>({10, 50, 100}));
}

TEST_CASE("config json round trip") {
  PipelineConfig cfg;
  cfg.k_graph = 20;
  cfg.neg_weight = 2.5;
  cfg.scoring_method = ScoringMethod::kProduct;
  cfg.ablation_ks = {5, 20};
  cfg.seed = 42;
  const PipelineConfig reparsed = PipelineConfig::from_json(cfg.to_json());
  CHECK(reparsed.k_graph == 20);
  CHECK(reparsed.neg_weight.value() == 2.5);
  CHECK(reparsed.scoring_method == ScoringMethod::kProduct);
  CHECK(reparsed.ablation_ks == std::vector<int>({5, 20}));
  CHECK(reparsed.seed == 42);
}

TEST_CASE("partial json keeps defaults for missing keys") {
  const PipelineConfig cfg =
      PipelineConfig::from_json(R"({"k_graph": 7, "seed": 9})");
  CHECK(cfg.k_graph == 7);
  CHECK(cfg.seed == 9);
  CHECK(cfg.epochs == 50);
  CHECK(cfg.scoring_method == ScoringMethod::kWeighted);
}

TEST_CASE("unknown keys are rejected before any computation") {
  try {
    PipelineConfig::from_json(R"({"k_grahp": 7})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBadConfig);
    CHECK(std::string(e.what()).find("k_grahp") != std::string::npos);
  }
}

TEST_CASE("out-of-range values are rejected") {
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"k_graph": 0})"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"target_fraction": 0.0})"),
                  Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"target_fraction": 1.5})"),
                  Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"epochs": -3})"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"neg_weight": 0})"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"gcn_dims": []})"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"scoring_method": "huh"})"),
                  Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"iterations": -1})"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"("not an object")"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json("{invalid json"), Error);
}

TEST_CASE("neg_weight accepts auto and positive numbers") {
  CHECK_FALSE(PipelineConfig::from_json(R"({"neg_weight": "auto"})")
                  .neg_weight.has_value());
  CHECK(PipelineConfig::from_json(R"({"neg_weight": 3.0})").neg_weight.value() ==
        3.0);
  CHECK_THROWS_AS(PipelineConfig::from_json(R"({"neg_weight": []})"), Error);
}

TEST_CASE("set overrides parse scalars, strings, and lists") {
  PipelineConfig cfg;
  cfg.apply_override("k_graph=13");
  CHECK(cfg.k_graph == 13);
  cfg.apply_override("learning_rate=0.5");
  CHECK(cfg.learning_rate == 0.5);
  cfg.apply_override("scoring_method=product");
  CHECK(cfg.scoring_method == ScoringMethod::kProduct);
  cfg.apply_override("gcn_dims=[32,16]");
  CHECK(cfg.gcn_dims == std::vector<int>({32, 16}));
  cfg.apply_override("neg_weight=auto");
  CHECK_FALSE(cfg.neg_weight.has_value());
  CHECK_THROWS_AS(cfg.apply_override("nonsense"), Error);
  CHECK_THROWS_AS(cfg.apply_override("=5"), Error);
  CHECK_THROWS_AS(cfg.apply_override("bogus_key=5"), Error);
}

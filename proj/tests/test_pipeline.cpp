#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "detfuse/config.hpp"
#include "detfuse/errors.hpp"
#include "detfuse/pipeline.hpp"

using namespace detfuse;

namespace {

bool lists_key(const ValidationError& e, const std::string& key) {
    for (const auto& k : e.keys()) {
        if (k == key) return true;
    }
    return false;
}

Cluster site_cluster(double x, double y, double score, std::int64_t seed_id) {
    Cluster c;
    c.cls = "site";
    c.location = {x, y};
    c.score = score;
    c.seed_id = seed_id;
    return c;
}

DetectionField tiny_field(const std::string& cls, std::vector<RawDetection> dets) {
    DetectionField f;
    f.cls = cls;
    f.stride_m = 8.0;
    f.detections = std::move(dets);
    return f;
}

}  // namespace

TEST_CASE("the default config validates and survives a JSON round trip") {
    const PipelineConfig cfg = default_config();
    const nlohmann::json j = config_to_json(cfg);
    const PipelineConfig back = config_from_json(j);

    CHECK(back.seed == cfg.seed);
    CHECK(back.site.radius_m == cfg.site.radius_m);
    CHECK(back.component.alpha == cfg.component.alpha);
    CHECK(back.component_classes == cfg.component_classes);
    CHECK(back.fusion_model == cfg.fusion_model);
    CHECK(back.weights == cfg.weights);
    CHECK(back.scenario.detectors.size() == cfg.scenario.detectors.size());
    CHECK(back.scenario.clutter.size() == cfg.scenario.clutter.size());
    // The re-serialized document is identical, so nothing was lost or bent.
    CHECK(config_to_json(back) == j);
}

TEST_CASE("one seed propagates into the scenario and both model configs") {
    PipelineConfig cfg = config_from_json(nlohmann::json{{"seed", 42}});
    CHECK(cfg.seed == 42);
    CHECK(cfg.scenario.seed == 42);
    CHECK(cfg.mlp.seed == 42);
    CHECK(cfg.anfis.seed == 42);
}

TEST_CASE("a partial config merges over the defaults") {
    const nlohmann::json j{{"fusion", {{"model", "or"}, {"combo", "empty+3"}}},
                           {"site", {{"radius_m", 250.0}}}};
    const PipelineConfig cfg = config_from_json(j);
    CHECK(cfg.fusion_model == FusionModelKind::OrGate);
    CHECK(cfg.combo == Combo::EmptyPlus3);
    CHECK(cfg.site.radius_m == 250.0);
    // Untouched sections keep their defaults.
    CHECK(cfg.site.alpha == 0.9);
    CHECK(cfg.component.radius_m == 32.0);
    CHECK(cfg.feature_type == FeatureType::ClusterCount);
}

TEST_CASE("unknown, ill-typed and out-of-domain keys are reported by path") {
    const auto keys_of = [](const nlohmann::json& j) {
        try {
            config_from_json(j);
        } catch (const ValidationError& e) {
            return e.keys();
        }
        return std::vector<std::string>{};
    };

    CHECK(keys_of({{"bogus", 1}}) == std::vector<std::string>{"bogus"});
    CHECK(keys_of({{"fusion", {{"bogus", 1}}}}) == std::vector<std::string>{"fusion.bogus"});
    CHECK(keys_of({{"seed", "not-a-number"}}) == std::vector<std::string>{"seed"});
    CHECK(keys_of({{"fusion", {{"model", "voting"}}}}) ==
          std::vector<std::string>{"fusion.model"});
    CHECK(keys_of({{"site", {{"radius_m", -1.0}}}}) == std::vector<std::string>{"site.radius_m"});

    // Several offenders arrive together.
    try {
        config_from_json({{"bogus", 1}, {"rank", {{"radius_m", 0.0}}}});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(lists_key(e, "bogus"));
        CHECK(lists_key(e, "rank.radius_m"));
    }
}

TEST_CASE("config files load with merge semantics and parse errors carry the file") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "detfuse_test_config.json").string();

    {
        std::ofstream out(path);
        out << "{\"seed\": 7, \"fusion\": {\"model\": \"anfis\"}}\n";
    }
    const PipelineConfig cfg = load_config_file(path);
    CHECK(cfg.seed == 7);
    CHECK(cfg.fusion_model == FusionModelKind::Anfis);
    CHECK(cfg.scenario.seed == 7);

    {
        std::ofstream out(path);
        out << "{\n  \"seed\": 7,\n  oops\n}\n";
    }
    CHECK_THROWS_AS(load_config_file(path), ParseError);
    try {
        load_config_file(path);
    } catch (const ParseError& e) {
        CHECK(e.file() == path);
        CHECK(e.line() == 3);
    }
    std::remove(path.c_str());
}

TEST_CASE("site clusters become candidates above the score floor, in rank order") {
    std::vector<Cluster> clusters;
    clusters.push_back(site_cluster(100.0, 200.0, 0.5, 11));
    clusters.push_back(site_cluster(300.0, 400.0, 0.02, 12));
    clusters.push_back(site_cluster(500.0, 600.0, 0.005, 13));

    const auto cands = candidates_from_clusters(clusters, 0.01);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].id == 0);
    CHECK(cands[0].location.x == 100.0);
    CHECK(cands[0].site_score == 0.5);
    CHECK(cands[0].source == CandidateSource::Scan);
    CHECK(!cands[0].label.has_value());
    CHECK(cands[1].id == 1);
    CHECK(cands[1].site_score == 0.02);

    CHECK(candidates_from_clusters({}, 0.01).empty());
}

TEST_CASE("labeling claims each site once, nearest first in list order") {
    const DistanceModel planar{DistanceKind::PlanarEuclidean, 0.0};
    std::vector<SiteTruth> sites(2);
    sites[0].id = 0;
    sites[0].center = {0.0, 0.0};
    sites[1].id = 1;
    sites[1].center = {1000.0, 0.0};

    std::vector<Candidate> cands(4);
    cands[0].location = {10.0, 0.0};    // claims site 0
    cands[1].location = {40.0, 0.0};    // site 0 already claimed -> false
    cands[2].location = {1100.0, 0.0};  // claims site 1
    cands[3].location = {0.0, 150.0};   // exactly at the radius: no match

    label_candidates(cands, sites, 150.0, planar);
    CHECK(cands[0].label == true);
    CHECK(cands[1].label == false);
    CHECK(cands[2].label == true);
    CHECK(cands[3].label == false);

    CHECK_THROWS_AS(label_candidates(cands, sites, 0.0, planar), std::invalid_argument);
}

TEST_CASE("tile restriction keeps the closed box and the field metadata") {
    auto field = tiny_field("tel", {{0, {100.0, 100.0}, 0.4, -1},
                                    {1, {420.0, 100.0}, 0.99, -1},
                                    {2, {100.0, 421.0}, 0.99, -1}});
    const auto tile = tile_restrict(field, {100.0, 100.0}, 640.0);
    REQUIRE(tile.detections.size() == 2);
    CHECK(tile.detections[0].id == 0);
    CHECK(tile.detections[0].score == 0.4);  // scores stay uncut
    CHECK(tile.detections[1].id == 1);       // |dx| = 320 = half: inclusive
    CHECK(tile.cls == "tel");
    CHECK(tile.stride_m == 8.0);
    CHECK_THROWS_AS(tile_restrict(field, {0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("cluster_class cuts at alpha and normalizes by the field's stride") {
    auto field = tiny_field("site", {{0, {0.0, 0.0}, 0.7, -1}, {1, {5.0, 0.0}, 0.3, -1}});
    field.stride_m = 8.0;
    StageConfig stage{0.5, 300.0, 75.0, PenaltyMode::Truncate};

    const auto clusters = cluster_class(field, stage);
    REQUIRE(clusters.size() == 1);  // the 0.3 detection falls to the cut
    CHECK(clusters[0].members.size() == 1);
    // Normalization follows the data's stride (8 m), not the stage default.
    const auto nc = norm_constants(300.0, 8.0);
    CHECK(clusters[0].score == 0.7 / nc.c_norm);
}

TEST_CASE("evidence extraction fills configured classes missing from the data") {
    PipelineConfig cfg = default_config();
    cfg.component_classes = {"missile", "tel"};

    std::map<std::string, DetectionField> fields;
    fields["missile"] = tiny_field("missile", {{0, {10.0, 0.0}, 0.995, -1}});

    Candidate cand;
    cand.id = 0;
    cand.location = {0.0, 0.0};

    const auto evidence = build_evidence(fields, {cand}, cfg);
    REQUIRE(evidence.size() == 1);
    CHECK(class_features(evidence[0].features, "missile").cluster_count == 1);
    CHECK(class_features(evidence[0].features, "tel").cluster_count == 0);
    CHECK(class_features(evidence[0].features, "tel").raw_max == 0.0);
    CHECK(evidence[0].clusters_by_class.at("tel").empty());

    PipelineConfig bad = cfg;
    bad.tile_box_m = 0.0;
    CHECK_THROWS_AS(build_evidence(fields, {cand}, bad), std::invalid_argument);
    bad = cfg;
    bad.feature_radius_m = -1.0;
    CHECK_THROWS_AS(build_evidence(fields, {cand}, bad), std::invalid_argument);
}

TEST_CASE("per-class threshold fitting labels its outputs and rejects unlabeled rows") {
    std::vector<CandidateFeatures> feats(4);
    for (int i = 0; i < 4; ++i) {
        feats[i].candidate_id = i;
        feats[i].label = i >= 2;  // two negatives, two positives
        feats[i].by_class["missile"].cluster_count = i >= 2 ? 3 : 0;
        feats[i].by_class["tel"].cluster_count = i >= 2 ? 2 : 1;
    }

    const auto fitted = fit_class_thresholds(feats, {"missile", "tel"}, FeatureType::ClusterCount);
    REQUIRE(fitted.size() == 2);
    CHECK(fitted[0].cls == "missile");
    CHECK(fitted[0].threshold == 3.0);
    CHECK(fitted[0].f1 == 1.0);
    CHECK(fitted[0].feature_type == "cluster-count");
    CHECK(fitted[1].cls == "tel");
    CHECK(fitted[1].threshold == 2.0);

    feats[1].label.reset();
    CHECK_THROWS_AS(fit_class_thresholds(feats, {"missile"}, FeatureType::ClusterCount),
                    std::invalid_argument);
}

TEST_CASE("rank scoring requires evidence aligned with the candidates") {
    const std::vector<Candidate> cands(2);
    const std::vector<CandidateEvidence> evidence(1);
    CHECK_THROWS_AS(
        rank_scores(cands, evidence, expert_weights(), 150.0, DistanceModel{}),
        std::invalid_argument);
}

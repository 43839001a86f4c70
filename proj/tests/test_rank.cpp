#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "detfuse/rank.hpp"

using namespace detfuse;

namespace {

const DistanceModel kPlanar{DistanceKind::PlanarEuclidean, 0.0};

Cluster cluster_at(double x, double y, double score) {
    Cluster c;
    c.location = {x, y};
    c.score = score;
    return c;
}

Candidate candidate_at(std::int64_t id, double x, double y, double site_score,
                       std::optional<bool> label = {}) {
    Candidate c;
    c.id = id;
    c.location = {x, y};
    c.site_score = site_score;
    c.label = label;
    return c;
}

}  // namespace

TEST_CASE("the expert profile weights launch pads four-fold") {
    const auto w = expert_weights();
    CHECK(w.site == 1.0);
    CHECK(w.by_class.at("empty_lp") == 4.0);
    CHECK(w.by_class.at("combo_lp") == 4.0);
    CHECK(w.by_class.at("missile") == 1.0);
    CHECK(w.by_class.at("tel") == 1.0);
    CHECK(w.by_class.at("tel_group") == 2.0);
    validate(w);

    const auto c = candidate_at(0, 0.0, 0.0, 0.5);
    const std::map<std::string, std::vector<Cluster>> clusters = {
        {"empty_lp", {cluster_at(10.0, 0.0, 0.1), cluster_at(0.0, 20.0, 0.2)}},
        {"tel", {cluster_at(-30.0, 0.0, 0.2)}},
    };
    // 1 * 0.5 + 4 * (0.1 + 0.2) + 1 * 0.2
    CHECK(fused_score(c, clusters, w, 150.0, kPlanar) ==
          doctest::Approx(1.9).epsilon(1e-12));
}

TEST_CASE("uniform weights sum the in-range cluster scores plainly") {
    const auto w = uniform_weights({"missile", "tel"});
    CHECK(w.site == 1.0);
    CHECK(w.by_class.size() == 2);
    const auto c = candidate_at(0, 0.0, 0.0, 0.25);
    const std::map<std::string, std::vector<Cluster>> clusters = {
        {"missile", {cluster_at(5.0, 0.0, 0.5)}},
        {"tel", {cluster_at(0.0, 5.0, 0.125)}},
    };
    CHECK(fused_score(c, clusters, w, 150.0, kPlanar) == 0.25 + 0.5 + 0.125);
}

TEST_CASE("the rank radius is strict and unknown classes weigh nothing") {
    const auto w = uniform_weights({"missile"});
    const auto c = candidate_at(0, 0.0, 0.0, 0.0);
    const std::map<std::string, std::vector<Cluster>> clusters = {
        {"missile", {cluster_at(150.0, 0.0, 0.5), cluster_at(149.0, 0.0, 0.25)}},
        {"never_seen", {cluster_at(1.0, 0.0, 9.9)}},
    };
    CHECK(fused_score(c, clusters, w, 150.0, kPlanar) == 0.25);
    CHECK_THROWS_AS(fused_score(c, clusters, w, 0.0, kPlanar), std::invalid_argument);
}

TEST_CASE("a site-only profile scores candidates by their own cluster alone") {
    WeightProfile w;
    w.site = 1.0;
    validate(w);
    const auto c = candidate_at(0, 0.0, 0.0, 0.625);
    const std::map<std::string, std::vector<Cluster>> clusters = {
        {"missile", {cluster_at(1.0, 0.0, 0.5)}},
    };
    CHECK(fused_score(c, clusters, w, 150.0, kPlanar) == 0.625);
}

TEST_CASE("weight profiles reject negatives and all-zero") {
    WeightProfile w;
    w.site = -0.5;
    CHECK_THROWS_AS(validate(w), std::invalid_argument);
    w.site = 0.0;
    CHECK_THROWS_AS(validate(w), std::invalid_argument);
    w.by_class["missile"] = -1.0;
    CHECK_THROWS_AS(validate(w), std::invalid_argument);
    w.by_class["missile"] = 2.0;
    validate(w);  // site 0 is fine once a class carries weight
}

TEST_CASE("rerank sorts by score with id tie-breaks and 1-based ranks") {
    const std::vector<Candidate> candidates = {
        candidate_at(0, 0, 0, 0, true),
        candidate_at(1, 0, 0, 0, true),
        candidate_at(2, 0, 0, 0, false),
        candidate_at(3, 0, 0, 0, std::nullopt),
    };
    const std::vector<double> scores = {0.5, 0.9, 0.5, 0.1};
    const auto ranked = rerank(candidates, scores);
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].candidate_id == 1);
    CHECK(ranked[0].rank == 1);
    CHECK(ranked[0].fused_score == 0.9);
    REQUIRE(ranked[0].is_tp.has_value());
    CHECK(*ranked[0].is_tp == true);
    CHECK(ranked[1].candidate_id == 0);  // 0.5 tie: lower id first
    CHECK(ranked[2].candidate_id == 2);
    CHECK(ranked[3].candidate_id == 3);
    CHECK(ranked[3].rank == 4);
    CHECK(!ranked[3].is_tp.has_value());

    CHECK_THROWS_AS(rerank(candidates, {0.5}), std::invalid_argument);
}

TEST_CASE("avg_tp_rank averages the 1-based ranks of true positives") {
    std::vector<Candidate> candidates;
    std::vector<double> scores;
    for (int i = 0; i < 10; ++i) {
        candidates.push_back(candidate_at(i, 0, 0, 0, i < 3));  // ids 0..2 are TPs
        scores.push_back(10.0 - i);                             // already in id order
    }
    const auto ranked = rerank(candidates, scores);
    CHECK(avg_tp_rank(ranked) == 2.0);  // ranks 1, 2, 3

    // Push one TP to the bottom: ranks 1, 2, 10.
    scores[2] = 0.0;
    const auto worse = rerank(candidates, scores);
    CHECK(avg_tp_rank(worse) == doctest::Approx(13.0 / 3.0).epsilon(1e-15));

    // No TP at all throws.
    std::vector<Candidate> negatives = {candidate_at(0, 0, 0, 0, false),
                                        candidate_at(1, 0, 0, 0, std::nullopt)};
    CHECK_THROWS_AS(avg_tp_rank(rerank(negatives, {1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("the mean TP rank can never beat packing the top of the list") {
    std::vector<Candidate> candidates;
    std::vector<double> scores;
    const int n_tp = 4;
    for (int i = 0; i < 12; ++i) {
        candidates.push_back(candidate_at(i, 0, 0, 0, (i % 3) == 0));  // 4 TPs scattered
        scores.push_back(static_cast<double>((i * 7) % 12));
    }
    const auto ranked = rerank(candidates, scores);
    CHECK(avg_tp_rank(ranked) >= (n_tp + 1) / 2.0);
}

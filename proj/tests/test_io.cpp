#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "detfuse/io.hpp"

using namespace detfuse;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("detfuse_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double parse_double(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

TEST_CASE("format_double emits shortest round-trip decimals") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 20260816.0, 0.0, -0.0,
                           0.9999999999999999}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("detection fields round-trip through CSV") {
    std::map<std::string, DetectionField> fields;
    DetectionField site;
    site.cls = "site";
    site.model = DistanceModel{DistanceKind::PlanarEuclidean};
    site.stride_m = 75.0;
    site.detections = {{0, {0.1, 1.0 / 3.0}, 0.95, -1}, {1, {12345.6789, -0.25}, 1.0, 3}};
    DetectionField missile;
    missile.cls = "missile";
    missile.model = site.model;
    missile.stride_m = 8.0;
    missile.detections = {{0, {7.0, 8.0}, 0.5, -1}};
    fields = {{"site", site}, {"missile", missile}};

    const auto path = tmp_path("detections.csv");
    write_detections_csv(path, fields);
    const auto back = read_detections_csv(path, site.model, {{"site", 75.0}, {"missile", 8.0}});

    REQUIRE(back.size() == 2);
    const auto& s = back.at("site");
    CHECK(s.stride_m == 75.0);
    CHECK(s.cls == "site");
    REQUIRE(s.detections.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(s.detections[i].id == site.detections[i].id);
        CHECK(s.detections[i].location.x == site.detections[i].location.x);
        CHECK(s.detections[i].location.y == site.detections[i].location.y);
        CHECK(s.detections[i].score == site.detections[i].score);
        CHECK(s.detections[i].tile == site.detections[i].tile);
    }
    CHECK(back.at("missile").stride_m == 8.0);

    // A class with no configured stride is a read error.
    try {
        read_detections_csv(path, site.model, {{"site", 75.0}});
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.file() == path);
    }

    // Scores outside [0,1] are rejected on read.
    auto bad = fields;
    bad.at("site").detections[0].score = 1.5;
    write_detections_csv(path, bad);
    CHECK_THROWS_AS(read_detections_csv(path, site.model, {{"site", 75.0}, {"missile", 8.0}}),
                    ParseError);
}

TEST_CASE("malformed CSV reports file and line") {
    const auto path = tmp_path("malformed.csv");

    write_text(path, "id,class,x,y\n");
    try {
        read_detections_csv(path, DistanceModel{}, {});
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.file() == path);
        CHECK(e.line() == 1);
    }

    write_text(path, "id,x,y,site_score,label,source\n1,2.0,3.0\n");
    try {
        read_candidates_csv(path);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    write_text(path, "id,x,y,site_score,label,source\n1,abc,3.0,0.5,,scan\n");
    try {
        read_candidates_csv(path);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    write_text(path, "");
    CHECK_THROWS_AS(read_candidates_csv(path), ParseError);
}

TEST_CASE("candidates round-trip with optional labels and sources") {
    std::vector<Candidate> candidates;
    Candidate a;
    a.id = 5;
    a.location = {10.5, -2.25};
    a.site_score = 0.75;
    a.label = true;
    a.source = CandidateSource::Scan;
    Candidate b;
    b.id = 6;
    b.location = {0.0, 0.0};
    b.site_score = 1.0 / 7.0;
    b.label = false;
    b.source = CandidateSource::PseudoTrain;
    Candidate c;
    c.id = 7;
    c.location = {1.0, 2.0};
    c.site_score = 0.0;
    candidates = {a, b, c};

    const auto path = tmp_path("candidates.csv");
    write_candidates_csv(path, candidates);
    const auto back = read_candidates_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].id == 5);
    CHECK(back[0].location.x == 10.5);
    CHECK(back[0].site_score == 0.75);
    REQUIRE(back[0].label.has_value());
    CHECK(*back[0].label == true);
    CHECK(back[0].source == CandidateSource::Scan);
    CHECK(back[1].site_score == 1.0 / 7.0);
    CHECK(*back[1].label == false);
    CHECK(back[1].source == CandidateSource::PseudoTrain);
    CHECK(!back[2].label.has_value());
}

TEST_CASE("candidate features round-trip grouped by candidate") {
    CandidateFeatures f1;
    f1.candidate_id = 10;
    f1.label = true;
    f1.by_class["missile"] = {0.75, 3, 2, 0.5};
    f1.by_class["tel"] = {0.0, 0, 0, 0.0};
    CandidateFeatures f2;
    f2.candidate_id = 11;
    f2.by_class["missile"] = {1.0 / 3.0, 1, 1, 0.25};

    const auto path = tmp_path("features.csv");
    write_features_csv(path, {f1, f2});
    const auto back = read_features_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].candidate_id == 10);
    REQUIRE(back[0].label.has_value());
    CHECK(*back[0].label == true);
    REQUIRE(back[0].by_class.size() == 2);
    CHECK(back[0].by_class.at("missile").raw_max == 0.75);
    CHECK(back[0].by_class.at("missile").raw_count == 3);
    CHECK(back[0].by_class.at("missile").cluster_count == 2);
    CHECK(back[0].by_class.at("missile").cluster_score_sum == 0.5);
    CHECK(back[1].candidate_id == 11);
    CHECK(!back[1].label.has_value());
    CHECK(back[1].by_class.at("missile").raw_max == 1.0 / 3.0);

    write_text(path,
               "candidate_id,label,class,raw_max,raw_count,cluster_count,cluster_score_sum\n"
               "1,,missile,0.5,1,1,0.5\n"
               "1,,missile,0.5,1,1,0.5\n");
    CHECK_THROWS_AS(read_features_csv(path), ParseError);
}

TEST_CASE("decision records round-trip") {
    std::vector<DecisionRecord> records;
    records.push_back({4, true, 0.875, "mlp", "all5", "cluster-count"});
    records.push_back({5, false, 0.125, "or", "empty+3", "raw-max"});

    const auto path = tmp_path("decisions.csv");
    write_decisions_csv(path, records);
    const auto back = read_decisions_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].candidate_id == 4);
    CHECK(back[0].decision == true);
    CHECK(back[0].score == 0.875);
    CHECK(back[0].model == "mlp");
    CHECK(back[0].combo == "all5");
    CHECK(back[0].feature_type == "cluster-count");
    CHECK(back[1].decision == false);
}

TEST_CASE("ranked candidates round-trip") {
    std::vector<RankedCandidate> ranked;
    ranked.push_back({1, 7, 1.9, true});
    ranked.push_back({2, 3, 0.5, std::nullopt});

    const auto path = tmp_path("ranked.csv");
    write_ranked_csv(path, ranked);
    const auto back = read_ranked_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].rank == 1);
    CHECK(back[0].candidate_id == 7);
    CHECK(back[0].fused_score == 1.9);
    REQUIRE(back[0].is_tp.has_value());
    CHECK(*back[0].is_tp == true);
    CHECK(!back[1].is_tp.has_value());
}

TEST_CASE("sweep artifacts: CSV rows and a plottable SVG") {
    const std::vector<SweepPoint> curve = {
        {0.5, 1.0, 0.4, 4.0 / 7.0}, {1.0, 1.0, 0.5, 2.0 / 3.0}, {2.0, 0.5, 1.0, 2.0 / 3.0}};
    const auto csv_path = tmp_path("sweep.csv");
    write_sweep_csv(csv_path, curve);
    const auto text = slurp(csv_path);
    CHECK(text.rfind("threshold,tpr,ppv,f1\n", 0) == 0);
    CHECK(text.find("0.5,1,0.4," + format_double(4.0 / 7.0)) != std::string::npos);

    const auto svg_path = tmp_path("sweep.svg");
    write_sweep_svg(svg_path, curve, "operating points");
    const auto svg = slurp(svg_path);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("operating points") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t at = svg.find("<polyline"); at != std::string::npos;
         at = svg.find("<polyline", at + 1)) {
        ++polylines;
    }
    CHECK(polylines == 3);

    CHECK_THROWS_AS(write_sweep_svg(svg_path, {}, "x"), std::invalid_argument);
    write_sweep_svg(svg_path, {curve[0]}, "single point");  // unit-span axis, no crash
}

TEST_CASE("thresholds round-trip through JSON with a format version") {
    std::vector<DtaThreshold> thresholds;
    thresholds.push_back({"missile", "cluster-count", 2.0, 1.0, 1.0, 1.0});
    thresholds.push_back({"tel", "raw-max", 0.1 + 0.2, 6.0 / 7.0, 0.8, 0.75});

    const auto path = tmp_path("thresholds.json");
    write_thresholds_json(path, thresholds);
    CHECK(read_json(path).at("format_version").get<std::string>() == kFormatVersion);

    const auto back = read_thresholds_json(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].cls == "missile");
    CHECK(back[0].feature_type == "cluster-count");
    CHECK(back[0].threshold == 2.0);
    CHECK(back[1].threshold == 0.1 + 0.2);  // doubles survive exactly
    CHECK(back[1].ppv == 0.75);
    CHECK(back[1].f1 == 6.0 / 7.0);
}

TEST_CASE("the truth table round-trips through JSON") {
    GeneratedScenario gen;
    gen.aoi = {200.0, 150.0};
    SiteTruth site;
    site.id = 3;
    site.center = {12345.5, 67890.25};
    site.pad_count = 2;
    site.pad_centers = {{12405.5, 67890.25}, {12285.5, 67890.25}};
    site.pad_occupancy = {PadKind::Missile, PadKind::Empty};
    gen.sites = {site};

    const auto path = tmp_path("truth.json");
    write_truth_json(path, gen);
    const auto back = read_truth_json(path);
    CHECK(back.aoi.width_km == 200.0);
    CHECK(back.aoi.height_km == 150.0);
    REQUIRE(back.sites.size() == 1);
    CHECK(back.sites[0].id == 3);
    CHECK(back.sites[0].center.x == 12345.5);
    CHECK(back.sites[0].pad_count == 2);
    REQUIRE(back.sites[0].pad_occupancy.size() == 2);
    CHECK(back.sites[0].pad_occupancy[0] == PadKind::Missile);
    CHECK(back.sites[0].pad_occupancy[1] == PadKind::Empty);
    CHECK(back.sites[0].pad_centers[1].x == 12285.5);
}

TEST_CASE("fusion models round-trip through JSON") {
    const auto path = tmp_path("model.json");

    FusionModel gate;
    gate.kind = FusionModelKind::OrGate;
    gate.combo = Combo::EmptyPlus3;
    gate.feature_type = FeatureType::RawCount;
    gate.classes = combo_classes(Combo::EmptyPlus3);
    for (const auto& cls : gate.classes) {
        gate.thresholds.push_back({cls, "raw-count", 2.0, 1.0, 1.0, 1.0});
    }
    write_model_json(path, gate);
    const auto gate_back = read_model_json(path);
    CHECK(gate_back.kind == FusionModelKind::OrGate);
    CHECK(gate_back.combo == Combo::EmptyPlus3);
    CHECK(gate_back.feature_type == FeatureType::RawCount);
    CHECK(gate_back.classes == gate.classes);
    CHECK(gate_back.thresholds.size() == 4);
    CHECK(!gate_back.mlp.has_value());
    CHECK(!gate_back.anfis.has_value());

    FusionModel mlp = gate;
    mlp.kind = FusionModelKind::Mlp;
    mlp.mlp_decision_threshold = 0.625;
    MlpConfig mcfg;
    mcfg.hidden = {4};
    mcfg.seed = 77;
    mlp.mlp = init_mlp(4, mcfg);
    write_model_json(path, mlp);
    const auto mlp_back = read_model_json(path);
    REQUIRE(mlp_back.mlp.has_value());
    CHECK(mlp_back.mlp->layer_sizes == mlp.mlp->layer_sizes);
    CHECK(mlp_back.mlp->weights == mlp.mlp->weights);  // bitwise
    CHECK(mlp_back.mlp->biases == mlp.mlp->biases);
    CHECK(mlp_back.mlp->hidden_activation == "tanh");
    CHECK(mlp_back.mlp->seed == 77);
    CHECK(mlp_back.mlp_decision_threshold == 0.625);

    FusionModel anfis = gate;
    anfis.kind = FusionModelKind::Anfis;
    anfis.anfis = make_anfis(gate.classes, {2.0, 2.0, 2.0, 2.0});
    anfis.anfis->rules[0].coeffs = {0.1, 0.2, 0.3, 1.0 / 3.0};
    anfis.anfis->rules[0].bias = -0.125;
    anfis.anfis->output_threshold = 0.375;
    write_model_json(path, anfis);
    const auto anfis_back = read_model_json(path);
    REQUIRE(anfis_back.anfis.has_value());
    CHECK(anfis_back.anfis->classes == gate.classes);
    CHECK(anfis_back.anfis->centers == anfis.anfis->centers);
    CHECK(anfis_back.anfis->steepness == anfis.anfis->steepness);
    REQUIRE(anfis_back.anfis->rules.size() == anfis.anfis->rules.size());
    CHECK(anfis_back.anfis->rules[0].coeffs == anfis.anfis->rules[0].coeffs);
    CHECK(anfis_back.anfis->rules[0].bias == -0.125);
    REQUIRE(anfis_back.anfis->rules[4].antecedents.size() == 4);
    CHECK(anfis_back.anfis->rules[4].antecedents[2].input == 2);
    CHECK(anfis_back.anfis->rules[4].antecedents[2].invert == true);
    CHECK(anfis_back.anfis->output_threshold == 0.375);
}

TEST_CASE("reports carry a format version and bad JSON points at its line") {
    const auto path = tmp_path("report.json");
    write_report_json(path, {{"candidates", 42}});
    const auto j = read_json(path);
    CHECK(j.at("format_version").get<std::string>() == kFormatVersion);
    CHECK(j.at("candidates").get<int>() == 42);

    write_text(path, "{\n  \"a\": 1,\n  bad\n}\n");
    try {
        read_json(path);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.file() == path);
        CHECK(e.line() == 3);
    }
}

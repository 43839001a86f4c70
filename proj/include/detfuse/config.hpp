#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "detfuse/anfis.hpp"
#include "detfuse/cluster.hpp"
#include "detfuse/fusion.hpp"
#include "detfuse/geo.hpp"
#include "detfuse/mlp.hpp"
#include "detfuse/synth.hpp"

namespace detfuse {

/// Amplify-and-cluster parameters for one scan stage.
struct StageConfig {
    double alpha = 0.99;
    double radius_m = 32.0;
    double stride_m = 8.0;
    PenaltyMode penalty = PenaltyMode::Truncate;
};

/// Everything the pipeline needs, with defaults that reproduce the reference
/// broad-area-search experiment. One seed drives scenario generation and all
/// model initialization (apply_seed copies it down).
struct PipelineConfig {
    std::uint64_t seed = 20260816;
    DistanceModel distance;

    StageConfig site{0.9, 300.0, 75.0, PenaltyMode::Truncate};
    StageConfig component{0.99, 32.0, 8.0, PenaltyMode::Truncate};
    std::vector<std::string> component_classes = {"empty_lp", "combo_lp", "missile", "tel",
                                                  "tel_group"};

    double feature_radius_m = 150.0;  // candidate-to-evidence association radius
    double tile_box_m = 640.0;        // candidate-centric extraction box (side length)

    double candidate_min_score = 0.01;  // site clusters below this never become candidates
    double match_radius_m = 150.0;      // candidate-to-truth matching radius

    FusionModelKind fusion_model = FusionModelKind::Mlp;
    Combo combo = Combo::All5;
    FeatureType feature_type = FeatureType::ClusterCount;
    MlpConfig mlp;
    AnfisConfig anfis;

    std::string weights = "expert";  // uniform | expert | path to a weights JSON
    double rank_radius_m = 150.0;

    Scenario scenario;
};

/// Defaults above plus the tuned synthetic scenario.
PipelineConfig default_config();

/// Parse a JSON config file and merge it over the defaults. Unknown keys and
/// out-of-domain values raise ValidationError listing the offending dotted
/// key paths; unreadable or malformed files raise ParseError.
PipelineConfig load_config_file(const std::string& path);

/// Same merge, for an already-parsed document (tests use this directly).
PipelineConfig config_from_json(const nlohmann::json& j);

/// Copy cfg.seed into the scenario and model seeds so one --seed flag
/// controls every random draw.
void apply_seed(PipelineConfig& cfg);

/// Full effective configuration as JSON, embedded in every report.
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace detfuse

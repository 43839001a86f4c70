#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detfuse/anfis.hpp"
#include "detfuse/dta.hpp"
#include "detfuse/features.hpp"
#include "detfuse/mlp.hpp"

namespace detfuse {

/// One feature value per component class, in a fixed class order, for one
/// candidate.
struct FeatureVector {
    std::int64_t candidate_id = 0;
    std::vector<std::string> classes;
    std::vector<double> values;
    bool labeled = false;
    bool label = false;
};

/// Per-class thresholds used to rescale inputs: v' = clamp((v - t)/t, -1, 1).
struct NormalizationSpec {
    std::vector<std::string> classes;
    std::vector<double> thresholds;
};

/// Elementwise clamp((v - t)/t, -1, 1). Throws on a zero/negative threshold
/// or a class set mismatch.
FeatureVector normalize_inputs(const FeatureVector& v, const NormalizationSpec& spec);

/// True iff any input is true. Throws on an empty input list.
bool or_gate(const std::vector<bool>& decisions);

/// Component-class combinations fused together.
enum class Combo {
    EmptyPlus3,  // empty launch pads + missiles, TELs, TEL groups
    ComboPlus3,  // combo launch pads + missiles, TELs, TEL groups
    All5,
};

Combo combo_from_string(const std::string& name);  // "empty+3" | "combo+3" | "all5"
std::string to_string(Combo combo);
std::vector<std::string> combo_classes(Combo combo);

enum class FusionModelKind { OrGate, Mlp, Anfis };

FusionModelKind fusion_model_from_string(const std::string& name);  // "or" | "mlp" | "anfis"
std::string to_string(FusionModelKind kind);

/// A trained decision-level fusion model. Per-class thresholds are always
/// present (the OR gate decides with them directly, the MLP rescales inputs
/// with them, the ANFIS centers its memberships on them).
struct FusionModel {
    FusionModelKind kind = FusionModelKind::OrGate;
    Combo combo = Combo::All5;
    FeatureType feature_type = FeatureType::ClusterCount;
    std::vector<std::string> classes;
    std::vector<DtaThreshold> thresholds;  // aligned with classes
    bool normalize = true;                 // MLP only: rescale inputs by thresholds
    double mlp_decision_threshold = 0.5;
    std::optional<MlpModel> mlp;
    std::optional<AnfisModel> anfis;
};

struct DecisionRecord {
    std::int64_t candidate_id = 0;
    bool decision = false;
    double score = 0.0;
    std::string model;
    std::string combo;
    std::string feature_type;
};

/// Assemble per-candidate vectors of the chosen feature type over the
/// combo's classes. Throws when a candidate lacks a required class.
std::vector<FeatureVector> make_feature_vectors(const std::vector<CandidateFeatures>& features,
                                                Combo combo, FeatureType type);

/// Fit the per-class thresholds on the training vectors and, for MLP/ANFIS,
/// train the model on them. Deterministic given the configs' seeds.
FusionModel train_fusion(const std::vector<FeatureVector>& train, FusionModelKind kind,
                         Combo combo, FeatureType type, const MlpConfig& mlp_config,
                         const AnfisConfig& anfis_config);

/// Model score for one candidate: positive-vote count (OR gate), output
/// probability (MLP), or inference output (ANFIS).
double fusion_score(const FusionModel& m, const FeatureVector& v);

/// Keep/reject decision for one candidate.
bool fusion_decision(const FusionModel& m, const FeatureVector& v);

/// Decision records for every candidate, in input order.
std::vector<DecisionRecord> fuse_candidates(const std::vector<FeatureVector>& candidates,
                                            const FusionModel& m);

/// Candidate ids kept by the records, in record order.
std::vector<std::int64_t> kept_ids(const std::vector<DecisionRecord>& records);

}  // namespace detfuse

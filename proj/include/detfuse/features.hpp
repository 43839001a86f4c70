#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "detfuse/cluster.hpp"
#include "detfuse/field.hpp"
#include "detfuse/geo.hpp"

namespace detfuse {

enum class CandidateSource {
    Scan,         // produced by clustering a scanned site field
    PseudoTrain,  // training candidate built from truth (site center or offset)
};

/// A candidate site location, typically the center of a site cluster.
struct Candidate {
    std::int64_t id = 0;
    Point location;
    double site_score = 0.0;    // normalized score of the candidate's own site cluster
    std::optional<bool> label;  // set when part of a labeled training/eval set
    CandidateSource source = CandidateSource::Scan;
};

/// The four feature types for one component class around one candidate.
struct ClassFeatureValues {
    double raw_max = 0.0;         // max raw score in the UNCUT field within radius
    std::int64_t raw_count = 0;   // detections at/above alpha within radius
    std::int64_t cluster_count = 0;
    double cluster_score_sum = 0.0;
};

struct CandidateFeatures {
    std::int64_t candidate_id = 0;
    std::optional<bool> label;
    std::map<std::string, ClassFeatureValues> by_class;
};

enum class FeatureType {
    RawMax,
    RawCount,
    ClusterCount,
    ClusterScoreSum,
};

FeatureType feature_type_from_string(const std::string& name);  // "raw-max", ...
std::string to_string(FeatureType type);

/// Value of the chosen feature type as a double.
double feature_value(const ClassFeatureValues& values, FeatureType type);

/// Feature values of one class; throws on a class the features do not carry.
const ClassFeatureValues& class_features(const CandidateFeatures& f, const std::string& cls);

/// Evidence for one component class when extracting candidate features.
/// `field` is the full detection field BEFORE any alpha cut (raw-max reads
/// uncut scores); `alpha` is the cut applied for raw-count; `clusters` are
/// the component clusters to count around the candidate (may be null/empty).
struct ClassEvidence {
    const DetectionField* field = nullptr;
    double alpha = 0.0;
    const std::vector<Cluster>* clusters = nullptr;
};

/// Extract the four feature types per class, using only evidence strictly
/// inside fusion_radius_m of the candidate location. A class with nothing in
/// range yields (0.0, 0, 0, 0.0). Pure per-candidate function.
CandidateFeatures extract_features(const Candidate& c,
                                   const std::map<std::string, ClassEvidence>& evidence,
                                   double fusion_radius_m);

}  // namespace detfuse

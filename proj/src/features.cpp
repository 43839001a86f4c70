#include "detfuse/features.hpp"

#include <stdexcept>

namespace detfuse {

FeatureType feature_type_from_string(const std::string& name) {
    if (name == "raw-max") return FeatureType::RawMax;
    if (name == "raw-count") return FeatureType::RawCount;
    if (name == "cluster-count") return FeatureType::ClusterCount;
    if (name == "cluster-score-sum") return FeatureType::ClusterScoreSum;
    throw std::invalid_argument("unknown feature type: " + name);
}

std::string to_string(FeatureType type) {
    switch (type) {
        case FeatureType::RawMax: return "raw-max";
        case FeatureType::RawCount: return "raw-count";
        case FeatureType::ClusterCount: return "cluster-count";
        case FeatureType::ClusterScoreSum: return "cluster-score-sum";
    }
    return "raw-max";
}

double feature_value(const ClassFeatureValues& values, FeatureType type) {
    switch (type) {
        case FeatureType::RawMax: return values.raw_max;
        case FeatureType::RawCount: return static_cast<double>(values.raw_count);
        case FeatureType::ClusterCount: return static_cast<double>(values.cluster_count);
        case FeatureType::ClusterScoreSum: return values.cluster_score_sum;
    }
    return 0.0;
}

const ClassFeatureValues& class_features(const CandidateFeatures& f, const std::string& cls) {
    const auto it = f.by_class.find(cls);
    if (it == f.by_class.end()) {
        throw std::invalid_argument("no features for class: " + cls);
    }
    return it->second;
}

CandidateFeatures extract_features(const Candidate& c,
                                   const std::map<std::string, ClassEvidence>& evidence,
                                   double fusion_radius_m) {
    if (!(fusion_radius_m > 0.0)) {
        throw std::invalid_argument("extract_features: fusion radius must be positive");
    }

    CandidateFeatures out;
    out.candidate_id = c.id;
    out.label = c.label;

    for (const auto& [cls, ev] : evidence) {
        if (ev.field == nullptr) {
            throw std::invalid_argument("extract_features: no field for class " + cls);
        }
        if (ev.alpha < 0.0 || ev.alpha > 1.0) {
            throw std::invalid_argument("extract_features: alpha outside [0,1] for class " + cls);
        }

        ClassFeatureValues v;
        for (const auto& det : ev.field->detections) {
            const double d = distance(c.location, det.location, ev.field->model);
            if (d >= fusion_radius_m) continue;
            if (det.score > v.raw_max) v.raw_max = det.score;
            if (det.score >= ev.alpha) ++v.raw_count;
        }
        if (ev.clusters != nullptr) {
            for (const auto& cl : *ev.clusters) {
                const double d = distance(c.location, cl.location, ev.field->model);
                if (d >= fusion_radius_m) continue;
                ++v.cluster_count;
                v.cluster_score_sum += cl.score;
            }
        }
        out.by_class.emplace(cls, v);
    }
    return out;
}

}  // namespace detfuse

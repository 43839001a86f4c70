#include "detfuse/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace detfuse {

std::vector<Cluster> cluster_class(const DetectionField& field, const StageConfig& stage) {
    const DetectionField cut = alpha_cut(field, stage.alpha);
    const auto deltas = amplify(cut, stage.radius_m);
    ClusterParams params;
    params.radius_m = stage.radius_m;
    params.alpha = stage.alpha;
    params.stride_m = field.stride_m;  // normalization follows the data's scan geometry
    params.penalty = stage.penalty;
    return cluster_field(cut, deltas, params);
}

std::vector<Candidate> candidates_from_clusters(const std::vector<Cluster>& site_clusters,
                                                double min_score) {
    std::vector<Candidate> out;
    for (const auto& c : site_clusters) {
        if (c.score < min_score) continue;
        Candidate cand;
        cand.id = static_cast<std::int64_t>(out.size());
        cand.location = c.location;
        cand.site_score = c.score;
        cand.source = CandidateSource::Scan;
        out.push_back(cand);
    }
    return out;
}

void label_candidates(std::vector<Candidate>& candidates, const std::vector<SiteTruth>& sites,
                      double match_radius_m, const DistanceModel& model) {
    if (!(match_radius_m > 0.0)) {
        throw std::invalid_argument("label_candidates: match radius must be positive");
    }
    std::vector<bool> claimed(sites.size(), false);
    for (auto& c : candidates) {
        std::size_t best = sites.size();
        double best_d = match_radius_m;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (claimed[i]) continue;
            const double d = distance(c.location, sites[i].center, model);
            if (d < best_d) {  // strict: a site exactly at the radius is no match
                best_d = d;
                best = i;
            }
        }
        if (best < sites.size()) {
            claimed[best] = true;
            c.label = true;
        } else {
            c.label = false;
        }
    }
}

DetectionField tile_restrict(const DetectionField& field, const Point& center, double box_m) {
    if (!(box_m > 0.0)) {
        throw std::invalid_argument("tile_restrict: box size must be positive");
    }
    DetectionField out;
    out.cls = field.cls;
    out.model = field.model;
    out.stride_m = field.stride_m;
    const double half = box_m / 2.0;
    if (field.model.kind == DistanceKind::PlanarEuclidean) {
        for (const auto& d : field.detections) {
            if (std::abs(d.location.x - center.x) <= half &&
                std::abs(d.location.y - center.y) <= half) {
                out.detections.push_back(d);
            }
        }
    } else {
        // Spherical scan tiles: keep the disc circumscribing the box.
        const double r = half * std::numbers::sqrt2;
        for (const auto& d : field.detections) {
            if (distance(d.location, center, field.model) <= r) out.detections.push_back(d);
        }
    }
    return out;
}

std::vector<CandidateEvidence> build_evidence(const std::map<std::string, DetectionField>& fields,
                                              const std::vector<Candidate>& candidates,
                                              const PipelineConfig& cfg) {
    // Validate every precondition of the per-candidate work up front; the
    // parallel loop below must not throw.
    if (!(cfg.tile_box_m > 0.0)) {
        throw std::invalid_argument("build_evidence: tile box must be positive");
    }
    if (!(cfg.feature_radius_m > 0.0)) {
        throw std::invalid_argument("build_evidence: feature radius must be positive");
    }
    if (!(cfg.component.alpha >= 0.0 && cfg.component.alpha <= 1.0)) {
        throw std::invalid_argument("build_evidence: component alpha must be in [0,1]");
    }
    if (!(cfg.component.radius_m > 0.0)) {
        throw std::invalid_argument("build_evidence: component radius must be positive");
    }
    if (!(cfg.component.stride_m > 0.0)) {
        throw std::invalid_argument("build_evidence: component stride must be positive");
    }
    for (const auto& c : candidates) {
        if (!std::isfinite(c.location.x) || !std::isfinite(c.location.y)) {
            throw std::invalid_argument("build_evidence: non-finite candidate location");
        }
    }

    // Stable per-class field pointers; classes with no data get an empty field.
    std::map<std::string, const DetectionField*> by_class;
    std::map<std::string, DetectionField> placeholders;
    for (const auto& cls : cfg.component_classes) {
        const auto it = fields.find(cls);
        if (it != fields.end()) {
            by_class[cls] = &it->second;
            continue;
        }
        DetectionField empty;
        empty.cls = cls;
        empty.model = cfg.distance;
        empty.stride_m = cfg.component.stride_m;
        by_class[cls] = &placeholders.emplace(cls, std::move(empty)).first->second;
    }
    for (const auto& [cls, field] : by_class) {
        if (!(field->stride_m > 0.0)) {
            throw std::invalid_argument("build_evidence: field stride must be positive: " + cls);
        }
        if (field->model.kind == DistanceKind::HaversineSphere &&
            !(field->model.sphere_radius_m > 0.0)) {
            throw std::invalid_argument("build_evidence: sphere radius must be positive: " + cls);
        }
        for (const auto& d : field->detections) {
            if (!std::isfinite(d.location.x) || !std::isfinite(d.location.y)) {
                throw std::invalid_argument("build_evidence: non-finite detection in " + cls);
            }
        }
    }

    std::vector<CandidateEvidence> out(candidates.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(candidates.size()); ++i) {
        const Candidate& cand = candidates[i];
        CandidateEvidence ev;
        std::map<std::string, DetectionField> tiles;  // uncut, kept for raw-score features
        for (const auto& [cls, field] : by_class) {
            auto tile = tiles.emplace(cls, tile_restrict(*field, cand.location, cfg.tile_box_m))
                            .first;
            const DetectionField cut = alpha_cut(tile->second, cfg.component.alpha);
            const auto deltas = amplify(cut, cfg.component.radius_m);
            ClusterParams params;
            params.radius_m = cfg.component.radius_m;
            params.alpha = cfg.component.alpha;
            params.stride_m = tile->second.stride_m;
            params.penalty = cfg.component.penalty;
            ev.clusters_by_class[cls] = cluster_field(cut, deltas, params);
        }
        std::map<std::string, ClassEvidence> evidence;
        for (const auto& [cls, tile] : tiles) {
            evidence[cls] =
                ClassEvidence{&tile, cfg.component.alpha, &ev.clusters_by_class.at(cls)};
        }
        ev.features = extract_features(cand, evidence, cfg.feature_radius_m);
        out[i] = std::move(ev);
    }
    return out;
}

std::vector<DtaThreshold> fit_class_thresholds(const std::vector<CandidateFeatures>& features,
                                               const std::vector<std::string>& classes,
                                               FeatureType type) {
    std::vector<bool> labels;
    labels.reserve(features.size());
    for (const auto& f : features) {
        if (!f.label.has_value()) {
            throw std::invalid_argument("fit_class_thresholds: unlabeled candidate " +
                                        std::to_string(f.candidate_id));
        }
        labels.push_back(*f.label);
    }
    std::vector<DtaThreshold> out;
    out.reserve(classes.size());
    for (const auto& cls : classes) {
        std::vector<double> values;
        values.reserve(features.size());
        for (const auto& f : features) {
            values.push_back(feature_value(class_features(f, cls), type));
        }
        DtaThreshold t = fit_threshold(values, labels);
        t.cls = cls;
        t.feature_type = to_string(type);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<double> rank_scores(const std::vector<Candidate>& candidates,
                                const std::vector<CandidateEvidence>& evidence,
                                const WeightProfile& weights, double radius_m,
                                const DistanceModel& model) {
    if (candidates.size() != evidence.size()) {
        throw std::invalid_argument("rank_scores: evidence misaligned with candidates");
    }
    validate(weights);
    std::vector<double> scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        scores[i] =
            fused_score(candidates[i], evidence[i].clusters_by_class, weights, radius_m, model);
    }
    return scores;
}

}  // namespace detfuse

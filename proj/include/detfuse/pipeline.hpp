#pragma once

#include <map>
#include <string>
#include <vector>

#include "detfuse/cluster.hpp"
#include "detfuse/config.hpp"
#include "detfuse/dta.hpp"
#include "detfuse/features.hpp"
#include "detfuse/field.hpp"
#include "detfuse/rank.hpp"
#include "detfuse/synth.hpp"

namespace detfuse {

/// One scan stage end to end: alpha cut, amplify, greedy clustering.
std::vector<Cluster> cluster_class(const DetectionField& field, const StageConfig& stage);

/// Site clusters scoring at least min_score become candidates, keeping rank
/// order; ids are assigned sequentially from 0.
std::vector<Candidate> candidates_from_clusters(const std::vector<Cluster>& site_clusters,
                                                double min_score);

/// Label candidates against the truth one-to-one: walking candidates in
/// order, each claims the nearest unclaimed site strictly within
/// match_radius_m (true), or is labeled false. Greedy in list order, so
/// higher-scoring candidates claim sites first.
void label_candidates(std::vector<Candidate>& candidates, const std::vector<SiteTruth>& sites,
                      double match_radius_m, const DistanceModel& model);

/// Detections inside the scan tile around a candidate: under the planar model
/// an axis-aligned box of side box_m, under the spherical model the disc
/// circumscribing that box. Keeps scores uncut.
DetectionField tile_restrict(const DetectionField& field, const Point& center, double box_m);

/// Per-candidate component evidence: features plus the tile-local component
/// clusters that produced them (rank fusion reuses the clusters).
struct CandidateEvidence {
    CandidateFeatures features;
    std::map<std::string, std::vector<Cluster>> clusters_by_class;
};

/// Extract component evidence for every candidate. Each configured component
/// class's field is restricted to the candidate's tile, amplified and
/// clustered at the component stage settings, then reduced to features within
/// the fusion radius. A configured class with no field present counts as an
/// empty field. Parallel across candidates; deterministic.
std::vector<CandidateEvidence> build_evidence(const std::map<std::string, DetectionField>& fields,
                                              const std::vector<Candidate>& candidates,
                                              const PipelineConfig& cfg);

/// Per-class F1-optimal thresholds of one feature type over labeled
/// candidates. Throws when any candidate lacks a label.
std::vector<DtaThreshold> fit_class_thresholds(const std::vector<CandidateFeatures>& features,
                                               const std::vector<std::string>& classes,
                                               FeatureType type);

/// Rank-fusion scores aligned with candidates (evidence[i] belongs to
/// candidates[i]).
std::vector<double> rank_scores(const std::vector<Candidate>& candidates,
                                const std::vector<CandidateEvidence>& evidence,
                                const WeightProfile& weights, double radius_m,
                                const DistanceModel& model);

}  // namespace detfuse

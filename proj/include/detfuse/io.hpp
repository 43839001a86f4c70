#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "detfuse/cluster.hpp"
#include "detfuse/dta.hpp"
#include "detfuse/errors.hpp"
#include "detfuse/features.hpp"
#include "detfuse/field.hpp"
#include "detfuse/fusion.hpp"
#include "detfuse/rank.hpp"
#include "detfuse/synth.hpp"

namespace detfuse {

/// Version stamped into every JSON artifact. CSV files are identified by
/// their exact header row instead (the column sets are part of the format).
inline constexpr const char* kFormatVersion = "1";

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

// --- detection fields ------------------------------------------------------
// CSV header: id,class,x,y,score,tile  (tile -1 when absent; one file may
// hold several classes). Stride and distance model are config-level
// metadata supplied on read.

void write_detections_csv(const std::string& path,
                          const std::map<std::string, DetectionField>& fields);
std::map<std::string, DetectionField> read_detections_csv(
    const std::string& path, const DistanceModel& model,
    const std::map<std::string, double>& stride_by_class);

// --- clusters ---------------------------------------------------------------
// CSV header: rank,class,score,x,y,seed_id,member_count  (output format;
// member detail lives only in memory)

void write_clusters_csv(const std::string& path, const std::vector<Cluster>& clusters);

// --- candidates --------------------------------------------------------------
// CSV header: id,x,y,site_score,label,source  (label empty when unlabeled;
// source is "scan" or "pseudo-train")

void write_candidates_csv(const std::string& path, const std::vector<Candidate>& candidates);
std::vector<Candidate> read_candidates_csv(const std::string& path);

// --- candidate features ------------------------------------------------------
// CSV header: candidate_id,label,class,raw_max,raw_count,cluster_count,cluster_score_sum
// One row per candidate x class; rows of one candidate are contiguous.

void write_features_csv(const std::string& path, const std::vector<CandidateFeatures>& features);
std::vector<CandidateFeatures> read_features_csv(const std::string& path);

// --- fusion decisions ---------------------------------------------------------
// CSV header: candidate_id,decision,score,model,combo,feature_type

void write_decisions_csv(const std::string& path, const std::vector<DecisionRecord>& records);
std::vector<DecisionRecord> read_decisions_csv(const std::string& path);

// --- ranked candidates --------------------------------------------------------
// CSV header: rank,candidate_id,fused_score,is_tp  (is_tp empty when unlabeled)

void write_ranked_csv(const std::string& path, const std::vector<RankedCandidate>& ranked);
std::vector<RankedCandidate> read_ranked_csv(const std::string& path);

// --- threshold sweeps ----------------------------------------------------------
// CSV header: threshold,tpr,ppv,f1

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& curve);

/// Static SVG line plot of TPR/PPV/F1 against the threshold.
void write_sweep_svg(const std::string& path, const std::vector<SweepPoint>& curve,
                     const std::string& title);

// --- JSON artifacts -------------------------------------------------------------

void write_thresholds_json(const std::string& path, const std::vector<DtaThreshold>& thresholds);
std::vector<DtaThreshold> read_thresholds_json(const std::string& path);

void write_truth_json(const std::string& path, const GeneratedScenario& gen);
struct TruthTable {
    AoiSpec aoi;
    std::vector<SiteTruth> sites;
};
TruthTable read_truth_json(const std::string& path);

void write_model_json(const std::string& path, const FusionModel& model);
FusionModel read_model_json(const std::string& path);

/// Any report object; a format_version field is added at the top level.
void write_report_json(const std::string& path, nlohmann::json report);
nlohmann::json read_json(const std::string& path);

}  // namespace detfuse

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detfuse/field.hpp"
#include "detfuse/geo.hpp"

namespace detfuse {

/// Weighting of detections beyond the aperture radius R.
enum class PenaltyMode {
    Truncate,  // weight 0 beyond R (members limited to R)
    Flat,      // weight -1 on [R, 2R)
    ExpDecay,  // weight -exp(-(2R-d)/R) on [R, 2R), reaching -1 at 2R
};

struct ClusterParams {
    double radius_m = 0.0;             // aperture radius R
    double alpha = 0.0;                // echoed for reporting
    double stride_m = 0.0;             // scan stride of the producing detector
    PenaltyMode penalty = PenaltyMode::Truncate;
    // Outer gather radius: R under truncation, 2R under penalty modes so the
    // annulus [R, 2R) has members to act on. 0 selects the default.
    double membership_radius_m = 0.0;

    double effective_membership_radius() const {
        if (membership_radius_m > 0.0) return membership_radius_m;
        return penalty == PenaltyMode::Truncate ? radius_m : 2.0 * radius_m;
    }
};

/// Normalizing constants in stride-relative units. With R' = R/stride:
///   n_volume = pi * R'^2 * (2 - 4/e)   (volume under the truncated decay)
///   n_max_p  = pi * R'^2               (lattice-count bound inside R')
///   c_norm   = n_volume * n_max_p
struct NormConstants {
    double r_prime = 0.0;
    double n_volume = 0.0;
    double n_max_p = 0.0;
    double c_norm = 0.0;
};

NormConstants norm_constants(double radius_m, double stride_m);

/// Member weight by distance from the cluster seed: 1 inside R, otherwise the
/// penalty mode's value.
double penalty_weight(double distance_m, double radius_m, PenaltyMode mode);

struct ClusterMember {
    std::int64_t detection_id = 0;
    double weight = 0.0;
    double distance_m = 0.0;
};

struct Cluster {
    std::int64_t id = 0;            // creation order during the greedy pass
    std::string cls;
    std::int64_t seed_id = 0;       // detection id of the popped seed
    Point location;                 // delta-weighted centroid of inner members
    std::vector<ClusterMember> members;
    double raw_weighted_sum = 0.0;
    double score = 0.0;             // raw_weighted_sum / c_norm
    int rank = 0;                   // 1-based after sorting by score
};

/// Greedy mode clustering of an amplified alpha-cut field.
///
/// Repeatedly pops the unassigned detection with the highest delta (ties by
/// detection id), gathers every unassigned detection strictly inside the
/// membership radius as members sorted by (distance, id), weights them with
/// penalty_weight, and scores the cluster as c_norm^-1 * sum(weight * delta).
/// Output is sorted by (score desc, seed id asc) with 1-based ranks.
///
/// `deltas` must be aligned with `field.detections` (same order, same ids),
/// as produced by amplify() on this field.
std::vector<Cluster> cluster_field(const DetectionField& field,
                                   const std::vector<AmplifiedDetection>& deltas,
                                   const ClusterParams& params);

/// First k clusters by score, ties by seed id. k past the end returns all.
std::vector<Cluster> top_k(const std::vector<Cluster>& clusters, std::size_t k);

PenaltyMode penalty_mode_from_string(const std::string& name);
std::string to_string(PenaltyMode mode);

}  // namespace detfuse

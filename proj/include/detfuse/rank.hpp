#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "detfuse/cluster.hpp"
#include "detfuse/features.hpp"
#include "detfuse/geo.hpp"

namespace detfuse {

/// Per-class weights for score-level rank fusion. `site` weights the
/// candidate's own cluster score; `by_class` weights the component cluster
/// score sums. All weights nonnegative, at least one nonzero.
struct WeightProfile {
    double site = 1.0;
    std::map<std::string, double> by_class;
};

/// Every listed class (and the site) weighted 1.
WeightProfile uniform_weights(const std::vector<std::string>& classes);

/// The built-in expert profile: launch pads 4, TEL groups 2, missiles, TELs
/// and the site itself 1.
WeightProfile expert_weights();

/// Throws unless all weights are nonnegative with at least one nonzero.
void validate(const WeightProfile& w);

/// w_site * site score + sum over classes of w_class * (sum of that class's
/// cluster scores strictly within radius of the candidate). Classes missing
/// from the profile weigh 0.
double fused_score(const Candidate& c,
                   const std::map<std::string, std::vector<Cluster>>& clusters_by_class,
                   const WeightProfile& w, double radius_m, const DistanceModel& model);

struct RankedCandidate {
    int rank = 0;  // 1-based
    std::int64_t candidate_id = 0;
    double fused_score = 0.0;
    std::optional<bool> is_tp;
};

/// Sort candidates by score descending, ties by candidate id ascending, and
/// assign 1-based ranks. scores[i] belongs to candidates[i].
std::vector<RankedCandidate> rerank(const std::vector<Candidate>& candidates,
                                    const std::vector<double>& scores);

/// Mean 1-based rank of the true positives. Throws when none are present.
double avg_tp_rank(const std::vector<RankedCandidate>& ranked);

}  // namespace detfuse

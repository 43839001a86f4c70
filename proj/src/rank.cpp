#include "detfuse/rank.hpp"

#include <algorithm>
#include <stdexcept>

namespace detfuse {

WeightProfile uniform_weights(const std::vector<std::string>& classes) {
    WeightProfile w;
    w.site = 1.0;
    for (const auto& cls : classes) w.by_class[cls] = 1.0;
    return w;
}

WeightProfile expert_weights() {
    WeightProfile w;
    w.site = 1.0;
    w.by_class = {
        {"empty_lp", 4.0}, {"combo_lp", 4.0}, {"missile", 1.0},
        {"tel", 1.0},      {"tel_group", 2.0},
    };
    return w;
}

void validate(const WeightProfile& w) {
    bool any_nonzero = w.site > 0.0;
    if (w.site < 0.0) throw std::invalid_argument("weight profile: negative site weight");
    for (const auto& [cls, v] : w.by_class) {
        if (v < 0.0) throw std::invalid_argument("weight profile: negative weight for " + cls);
        any_nonzero = any_nonzero || v > 0.0;
    }
    if (!any_nonzero) throw std::invalid_argument("weight profile: all weights zero");
}

double fused_score(const Candidate& c,
                   const std::map<std::string, std::vector<Cluster>>& clusters_by_class,
                   const WeightProfile& w, double radius_m, const DistanceModel& model) {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("fused_score: radius must be positive");
    }
    double score = w.site * c.site_score;
    for (const auto& [cls, clusters] : clusters_by_class) {
        const auto it = w.by_class.find(cls);
        if (it == w.by_class.end() || it->second == 0.0) continue;
        double class_sum = 0.0;
        for (const auto& cl : clusters) {
            if (distance(c.location, cl.location, model) < radius_m) class_sum += cl.score;
        }
        score += it->second * class_sum;
    }
    return score;
}

std::vector<RankedCandidate> rerank(const std::vector<Candidate>& candidates,
                                    const std::vector<double>& scores) {
    if (candidates.size() != scores.size()) {
        throw std::invalid_argument("rerank: one score per candidate required");
    }
    std::vector<RankedCandidate> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out[i].candidate_id = candidates[i].id;
        out[i].fused_score = scores[i];
        out[i].is_tp = candidates[i].label;
    }
    std::sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
        return a.candidate_id < b.candidate_id;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
    return out;
}

double avg_tp_rank(const std::vector<RankedCandidate>& ranked) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (const auto& r : ranked) {
        if (r.is_tp.value_or(false)) {
            sum += r.rank;
            ++count;
        }
    }
    if (count == 0) {
        throw std::invalid_argument("avg_tp_rank: no true positives in the ranking");
    }
    return sum / static_cast<double>(count);
}

}  // namespace detfuse

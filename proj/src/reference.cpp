#include "detfuse/reference.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace detfuse::serial {

std::vector<Neighbor> radius_query(const std::vector<IndexedPoint>& points,
                                   const Point& center, double radius_m,
                                   const DistanceModel& model) {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("radius query: radius must be positive");
    }
    std::vector<Neighbor> hits;
    for (const auto& p : points) {
        const double d = distance(center, p.pt, model);
        if (d < radius_m) hits.push_back({p.id, d});
    }
    std::sort(hits.begin(), hits.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return a.id < b.id;
    });
    return hits;
}

namespace {

// Unassigned detections strictly inside radius_m of center, as (distance,
// detection id)-sorted index/distance pairs.
std::vector<Neighbor> scan_neighbors(const DetectionField& field, const Point& center,
                                     double radius_m, const std::vector<char>* assigned) {
    std::vector<Neighbor> hits;
    for (std::size_t i = 0; i < field.detections.size(); ++i) {
        if (assigned && (*assigned)[i]) continue;
        const double d = distance(center, field.detections[i].location, field.model);
        if (d < radius_m) hits.push_back({static_cast<std::int64_t>(i), d});
    }
    std::sort(hits.begin(), hits.end(), [&field](const Neighbor& a, const Neighbor& b) {
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return field.detections[a.id].id < field.detections[b.id].id;
    });
    return hits;
}

}  // namespace

std::vector<AmplifiedDetection> amplify(const DetectionField& field, double radius_m) {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("amplify: R must be positive");
    }
    const std::size_t n = field.detections.size();
    std::vector<AmplifiedDetection> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& det = field.detections[i];
        const auto neighbors = scan_neighbors(field, det.location, radius_m, nullptr);
        double delta = 0.0;
        for (const auto& nb : neighbors) {
            delta += field.detections[nb.id].score * decay_weight(nb.distance_m, radius_m);
        }
        out[i] = {det.id, delta};
    }
    return out;
}

std::vector<Cluster> cluster_field(const DetectionField& field,
                                   const std::vector<AmplifiedDetection>& deltas,
                                   const ClusterParams& params) {
    if (!(params.radius_m > 0.0) || !(params.stride_m > 0.0)) {
        throw std::invalid_argument("cluster_field: R and stride must be positive");
    }
    if (deltas.size() != field.detections.size()) {
        throw std::invalid_argument("cluster_field: deltas not aligned with field");
    }
    const std::size_t n = field.detections.size();
    std::vector<Cluster> clusters;
    if (n == 0) return clusters;

    for (std::size_t i = 0; i < n; ++i) {
        if (deltas[i].id != field.detections[i].id) {
            throw std::invalid_argument("cluster_field: delta ids do not match field order");
        }
    }

    const double membership_r = params.effective_membership_radius();
    const NormConstants nc = norm_constants(params.radius_m, params.stride_m);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (deltas[a].delta != deltas[b].delta) return deltas[a].delta > deltas[b].delta;
        return field.detections[a].id < field.detections[b].id;
    });

    std::vector<char> assigned(n, 0);
    for (const std::size_t seed : order) {
        if (assigned[seed]) continue;
        const Point seed_loc = field.detections[seed].location;
        const auto hits = scan_neighbors(field, seed_loc, membership_r, &assigned);

        Cluster c;
        c.id = static_cast<std::int64_t>(clusters.size());
        c.cls = field.cls;
        c.seed_id = field.detections[seed].id;

        double weighted_sum = 0.0;
        double centroid_x = 0.0, centroid_y = 0.0, centroid_w = 0.0;
        for (const auto& h : hits) {
            const auto i = static_cast<std::size_t>(h.id);
            assigned[i] = 1;
            const double w = penalty_weight(h.distance_m, params.radius_m, params.penalty);
            c.members.push_back({field.detections[i].id, w, h.distance_m});
            weighted_sum += w * deltas[i].delta;
            if (w == 1.0) {
                centroid_x += deltas[i].delta * field.detections[i].location.x;
                centroid_y += deltas[i].delta * field.detections[i].location.y;
                centroid_w += deltas[i].delta;
            }
        }
        c.raw_weighted_sum = weighted_sum;
        c.score = weighted_sum / nc.c_norm;
        c.location = centroid_w > 0.0 ? Point{centroid_x / centroid_w, centroid_y / centroid_w}
                                      : seed_loc;
        clusters.push_back(std::move(c));
    }

    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.seed_id < b.seed_id;
    });
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        clusters[i].rank = static_cast<int>(i + 1);
    }
    return clusters;
}

}  // namespace detfuse::serial

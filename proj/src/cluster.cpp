#include "detfuse/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace detfuse {

NormConstants norm_constants(double radius_m, double stride_m) {
    if (!(radius_m > 0.0) || !(stride_m > 0.0)) {
        throw std::invalid_argument("norm_constants: R and stride must be positive");
    }
    NormConstants nc;
    nc.r_prime = radius_m / stride_m;
    const double r2 = nc.r_prime * nc.r_prime;
    nc.n_volume = std::numbers::pi * r2 * (2.0 - 4.0 / std::numbers::e);
    nc.n_max_p = std::numbers::pi * r2;
    nc.c_norm = nc.n_volume * nc.n_max_p;
    return nc;
}

double penalty_weight(double distance_m, double radius_m, PenaltyMode mode) {
    if (distance_m < radius_m) return 1.0;
    switch (mode) {
        case PenaltyMode::Truncate: return 0.0;
        case PenaltyMode::Flat: return -1.0;
        case PenaltyMode::ExpDecay:
            return -std::exp(-(2.0 * radius_m - distance_m) / radius_m);
    }
    return 0.0;
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

    std::vector<IndexedPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {field.detections[i].location, static_cast<std::int64_t>(i)};
    }
    const SpatialIndex index(std::move(pts), field.model, membership_r);

    // Pop order: delta descending, detection id ascending.
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

        auto hits = index.query(seed_loc, membership_r);
        hits.erase(std::remove_if(hits.begin(), hits.end(),
                                  [&](const Neighbor& h) { return assigned[h.id] != 0; }),
                   hits.end());
        std::sort(hits.begin(), hits.end(), [&](const Neighbor& a, const Neighbor& b) {
            if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
            return field.detections[a.id].id < field.detections[b.id].id;
        });

        Cluster c;
        c.id = static_cast<std::int64_t>(clusters.size());
        c.cls = field.cls;
        c.seed_id = field.detections[seed].id;
        c.members.reserve(hits.size());

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

std::vector<Cluster> top_k(const std::vector<Cluster>& clusters, std::size_t k) {
    if (k >= clusters.size()) return clusters;
    return {clusters.begin(), clusters.begin() + static_cast<std::ptrdiff_t>(k)};
}

PenaltyMode penalty_mode_from_string(const std::string& name) {
    if (name == "truncate") return PenaltyMode::Truncate;
    if (name == "flat") return PenaltyMode::Flat;
    if (name == "exp") return PenaltyMode::ExpDecay;
    throw std::invalid_argument("unknown penalty mode: " + name);
}

std::string to_string(PenaltyMode mode) {
    switch (mode) {
        case PenaltyMode::Truncate: return "truncate";
        case PenaltyMode::Flat: return "flat";
        case PenaltyMode::ExpDecay: return "exp";
    }
    return "truncate";
}

}  // namespace detfuse

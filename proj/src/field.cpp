#include "detfuse/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detfuse {

DetectionField alpha_cut(const DetectionField& field, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha_cut: alpha must be in [0,1]");
    }
    DetectionField cut;
    cut.cls = field.cls;
    cut.model = field.model;
    cut.stride_m = field.stride_m;
    cut.detections.reserve(field.detections.size());
    for (const auto& det : field.detections) {
        if (det.score >= alpha) cut.detections.push_back(det);
    }
    return cut;
}

double decay_weight(double distance_m, double radius_m) {
    if (distance_m < radius_m) return std::exp(-distance_m / radius_m);
    return 0.0;
}

std::vector<AmplifiedDetection> amplify(const DetectionField& field, double radius_m) {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("amplify: R must be positive");
    }
    const std::size_t n = field.detections.size();
    std::vector<AmplifiedDetection> out(n);
    if (n == 0) return out;

    std::vector<IndexedPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {field.detections[i].location, static_cast<std::int64_t>(i)};
    }
    const SpatialIndex index(std::move(pts), field.model, radius_m);

#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto& det = field.detections[i];
        auto neighbors = index.query(det.location, radius_m);
        // Sum in (distance, detection id) order: input permutations then
        // yield bit-identical deltas.
        std::sort(neighbors.begin(), neighbors.end(),
                  [&field](const Neighbor& a, const Neighbor& b) {
                      if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
                      return field.detections[a.id].id < field.detections[b.id].id;
                  });
        double delta = 0.0;
        for (const auto& nb : neighbors) {
            delta += field.detections[nb.id].score * decay_weight(nb.distance_m, radius_m);
        }
        out[i] = {det.id, delta};
    }
    return out;
}

}  // namespace detfuse

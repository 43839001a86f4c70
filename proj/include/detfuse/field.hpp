#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detfuse/geo.hpp"

namespace detfuse {

/// One detector confidence output with its geolocation.
struct RawDetection {
    std::int64_t id = 0;
    Point location;
    double score = 0.0;        // softmax-like confidence in [0,1]
    std::int64_t tile = -1;    // optional source tile, -1 when absent
};

/// All detections of one object class, with the scan geometry they came from.
struct DetectionField {
    std::string cls;
    DistanceModel model;
    double stride_m = 0.0;     // scanning stride of the producing detector
    std::vector<RawDetection> detections;
};

/// Distance-decay-weighted neighborhood score sum for one detection.
struct AmplifiedDetection {
    std::int64_t id = 0;
    double delta = 0.0;
};

/// Keep exactly the detections with score >= alpha. Stride, class and
/// distance model are preserved. Throws on alpha outside [0,1].
DetectionField alpha_cut(const DetectionField& field, double alpha);

/// Amplified spatial detection field: for each detection n,
///   delta_n = sum over p with d(p,n) < R of score(p) * exp(-d(p,n)/R),
/// including the self term at d=0 (weight 1). Parallel over detections;
/// neighbor terms are summed in (distance, id) order so the result is
/// deterministic regardless of thread count. Throws on R <= 0.
std::vector<AmplifiedDetection> amplify(const DetectionField& field, double radius_m);

/// Decay weight exp(-d/R) for d < R, else 0.
double decay_weight(double distance_m, double radius_m);

}  // namespace detfuse

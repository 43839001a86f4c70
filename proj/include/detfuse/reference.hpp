#pragma once

#include <cstdint>
#include <vector>

#include "detfuse/cluster.hpp"
#include "detfuse/field.hpp"
#include "detfuse/geo.hpp"

// Serial brute-force implementations of the spatial kernels. They share no
// indexing code with the production path (plain linear scans) and exist as
// the oracle for the test suites and the baseline for the benchmark target.
namespace detfuse::serial {

/// Linear-scan radius query: exactly the points with d < r, sorted by
/// (distance, id).
std::vector<Neighbor> radius_query(const std::vector<IndexedPoint>& points,
                                   const Point& center, double radius_m,
                                   const DistanceModel& model);

/// O(n^2) amplification, same contract as detfuse::amplify.
std::vector<AmplifiedDetection> amplify(const DetectionField& field, double radius_m);

/// O(n^2) greedy clustering, same contract as detfuse::cluster_field.
std::vector<Cluster> cluster_field(const DetectionField& field,
                                   const std::vector<AmplifiedDetection>& deltas,
                                   const ClusterParams& params);

}  // namespace detfuse::serial

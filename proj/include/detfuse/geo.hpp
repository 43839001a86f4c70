#pragma once

#include <cstdint>
#include <vector>

namespace detfuse {

/// Mean Earth radius in meters, used whenever the spherical model is active.
inline constexpr double kEarthRadiusM = 6371008.8;

/// A 2-D location. Planar model: meters east/north. Spherical model:
/// degrees longitude (x) / latitude (y).
struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class DistanceKind {
    PlanarEuclidean,
    HaversineSphere,
};

struct DistanceModel {
    DistanceKind kind = DistanceKind::PlanarEuclidean;
    double sphere_radius_m = kEarthRadiusM;
};

/// Great-circle or Euclidean distance in meters. Throws std::invalid_argument
/// on non-finite coordinates or a non-positive sphere radius.
double distance(const Point& a, const Point& b, const DistanceModel& model);

/// A point with a caller-chosen payload id (detection id, vector index, ...).
struct IndexedPoint {
    Point pt;
    std::int64_t id = 0;
};

/// Neighbor returned by a radius query, strictly inside the query radius.
struct Neighbor {
    std::int64_t id = 0;
    double distance_m = 0.0;
};

/// Uniform-grid bucket index over an immutable point set. Cell size should
/// match the typical query radius. Safe for concurrent queries after build.
///
/// Queries return exactly the points with distance(center, p) < r (strict),
/// sorted by (distance, id). Longitude cells wrap at the antimeridian in the
/// spherical model.
class SpatialIndex {
public:
    SpatialIndex(std::vector<IndexedPoint> points, DistanceModel model, double cell_size_m);

    std::vector<Neighbor> query(const Point& center, double radius_m) const;

    /// Payload ids only, same order as query().
    std::vector<std::int64_t> query_ids(const Point& center, double radius_m) const;

    std::size_t size() const { return points_.size(); }
    const DistanceModel& model() const { return model_; }

private:
    struct CellRange {
        std::uint64_t key;
        std::uint32_t begin;
        std::uint32_t end;
    };

    std::uint64_t cell_key(const Point& p) const;
    std::int64_t lon_cell(double lon_deg) const;
    void cells_overlapping(const Point& center, double radius_m,
                           std::vector<std::uint64_t>& out) const;

    std::vector<IndexedPoint> points_;  // sorted by cell key
    std::vector<CellRange> cells_;      // sorted by key, binary-searchable
    DistanceModel model_;
    double cell_size_m_ = 0.0;
    // Degree-sized cells for the spherical model.
    double cell_lon_deg_ = 0.0;
    double cell_lat_deg_ = 0.0;
    std::int64_t lon_cells_ = 0;  // cells per full 360 degrees (wrap modulus)
};

}  // namespace detfuse

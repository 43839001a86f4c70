#include "detfuse/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace detfuse {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_finite(const Point& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::invalid_argument("distance: non-finite coordinates");
    }
}

double haversine_m(const Point& a, const Point& b, double radius_m) {
    const double lat1 = a.y * kDegToRad;
    const double lat2 = b.y * kDegToRad;
    const double dlat = (b.y - a.y) * kDegToRad;
    const double dlon = (b.x - a.x) * kDegToRad;
    const double sl = std::sin(dlat / 2.0);
    const double so = std::sin(dlon / 2.0);
    double h = sl * sl + std::cos(lat1) * std::cos(lat2) * so * so;
    h = std::clamp(h, 0.0, 1.0);  // antipodal safety
    return 2.0 * radius_m * std::asin(std::sqrt(h));
}

std::uint64_t pack_cell(std::int64_t cx, std::int64_t cy) {
    // Offset into unsigned halves; coordinates stay far below 2^31 cells.
    const std::uint64_t ux = static_cast<std::uint32_t>(cx + 0x40000000LL);
    const std::uint64_t uy = static_cast<std::uint32_t>(cy + 0x40000000LL);
    return (ux << 32) | uy;
}

}  // namespace

double distance(const Point& a, const Point& b, const DistanceModel& model) {
    check_finite(a);
    check_finite(b);
    if (model.kind == DistanceKind::PlanarEuclidean) {
        return std::hypot(b.x - a.x, b.y - a.y);
    }
    if (!(model.sphere_radius_m > 0.0)) {
        throw std::invalid_argument("distance: sphere radius must be positive");
    }
    return haversine_m(a, b, model.sphere_radius_m);
}

SpatialIndex::SpatialIndex(std::vector<IndexedPoint> points, DistanceModel model,
                           double cell_size_m)
    : points_(std::move(points)), model_(model), cell_size_m_(cell_size_m) {
    if (!(cell_size_m > 0.0)) {
        throw std::invalid_argument("SpatialIndex: cell size must be positive");
    }
    if (model_.kind == DistanceKind::HaversineSphere && !(model_.sphere_radius_m > 0.0)) {
        throw std::invalid_argument("SpatialIndex: sphere radius must be positive");
    }
    for (const auto& p : points_) check_finite(p.pt);

    if (model_.kind == DistanceKind::HaversineSphere) {
        const double m_per_deg = model_.sphere_radius_m * kDegToRad;
        cell_lat_deg_ = cell_size_m_ / m_per_deg;
        // Longitude cells sized at the widest latitude present so a cell is
        // never narrower (in meters) than requested.
        double max_abs_lat = 0.0;
        for (const auto& p : points_) max_abs_lat = std::max(max_abs_lat, std::abs(p.pt.y));
        const double c = std::max(std::cos(std::min(max_abs_lat, 89.0) * kDegToRad), 1e-3);
        cell_lon_deg_ = cell_size_m_ / (m_per_deg * c);
        lon_cells_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(360.0 / cell_lon_deg_)));
    }

    std::stable_sort(points_.begin(), points_.end(),
                     [this](const IndexedPoint& a, const IndexedPoint& b) {
                         return cell_key(a.pt) < cell_key(b.pt);
                     });
    for (std::uint32_t i = 0; i < points_.size(); ++i) {
        const std::uint64_t key = cell_key(points_[i].pt);
        if (cells_.empty() || cells_.back().key != key) {
            cells_.push_back({key, i, i + 1});
        } else {
            cells_.back().end = i + 1;
        }
    }
}

std::uint64_t SpatialIndex::cell_key(const Point& p) const {
    if (model_.kind == DistanceKind::PlanarEuclidean) {
        const auto cx = static_cast<std::int64_t>(std::floor(p.x / cell_size_m_));
        const auto cy = static_cast<std::int64_t>(std::floor(p.y / cell_size_m_));
        return pack_cell(cx, cy);
    }
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / cell_lat_deg_));
    return pack_cell(lon_cell(p.x), cy);
}

std::int64_t SpatialIndex::lon_cell(double lon_deg) const {
    double s = std::fmod(lon_deg + 180.0, 360.0);
    if (s < 0.0) s += 360.0;
    const auto k = static_cast<std::int64_t>(std::floor(s / cell_lon_deg_));
    return std::min(k, lon_cells_ - 1);  // rounding guard at the 360 boundary
}

void SpatialIndex::cells_overlapping(const Point& center, double radius_m,
                                     std::vector<std::uint64_t>& out) const {
    out.clear();
    if (model_.kind == DistanceKind::PlanarEuclidean) {
        const auto cx0 = static_cast<std::int64_t>(std::floor((center.x - radius_m) / cell_size_m_));
        const auto cx1 = static_cast<std::int64_t>(std::floor((center.x + radius_m) / cell_size_m_));
        const auto cy0 = static_cast<std::int64_t>(std::floor((center.y - radius_m) / cell_size_m_));
        const auto cy1 = static_cast<std::int64_t>(std::floor((center.y + radius_m) / cell_size_m_));
        for (std::int64_t cx = cx0; cx <= cx1; ++cx)
            for (std::int64_t cy = cy0; cy <= cy1; ++cy)
                out.push_back(pack_cell(cx, cy));
        return;
    }
    const double m_per_deg = model_.sphere_radius_m * kDegToRad;
    const double dlat = radius_m / m_per_deg;
    const double lat_lo = std::max(center.y - dlat, -90.0);
    const double lat_hi = std::min(center.y + dlat, 90.0);
    // Widest longitude span over the latitude band, clamped near the poles.
    const double worst_lat = std::max(std::abs(lat_lo), std::abs(lat_hi));
    const double c = std::max(std::cos(std::min(worst_lat, 89.0) * kDegToRad), 1e-3);
    const double dlon = std::min(radius_m / (m_per_deg * c), 180.0);

    const auto cy0 = static_cast<std::int64_t>(std::floor(lat_lo / cell_lat_deg_));
    const auto cy1 = static_cast<std::int64_t>(std::floor(lat_hi / cell_lat_deg_));
    // The longitude ring is ragged: when the cell width does not divide 360
    // evenly the last cell absorbs the remainder, so plain index offsets go
    // wrong across the +/-180 seam.  Walk the covered arc cell by cell.
    std::vector<std::int64_t> arc;
    if (2.0 * dlon >= 360.0 - cell_lon_deg_) {
        for (std::int64_t k = 0; k < lon_cells_; ++k) arc.push_back(k);
    } else {
        std::int64_t k = lon_cell(center.x - dlon);
        const std::int64_t last = lon_cell(center.x + dlon);
        arc.push_back(k);
        while (k != last) {
            k = (k + 1) % lon_cells_;
            arc.push_back(k);
        }
    }
    for (const std::int64_t cx : arc) {
        for (std::int64_t cy = cy0; cy <= cy1; ++cy) out.push_back(pack_cell(cx, cy));
    }
}

std::vector<Neighbor> SpatialIndex::query(const Point& center, double radius_m) const {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("radius query: radius must be positive");
    }
    check_finite(center);
    std::vector<std::uint64_t> keys;
    cells_overlapping(center, radius_m, keys);

    std::vector<Neighbor> hits;
    for (const std::uint64_t key : keys) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                                   [](const CellRange& c, std::uint64_t k) { return c.key < k; });
        if (it == cells_.end() || it->key != key) continue;
        for (std::uint32_t i = it->begin; i < it->end; ++i) {
            const double d = distance(center, points_[i].pt, model_);
            if (d < radius_m) hits.push_back({points_[i].id, d});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return a.id < b.id;
    });
    return hits;
}

std::vector<std::int64_t> SpatialIndex::query_ids(const Point& center, double radius_m) const {
    const auto hits = query(center, radius_m);
    std::vector<std::int64_t> ids;
    ids.reserve(hits.size());
    for (const auto& h : hits) ids.push_back(h.id);
    return ids;
}

}  // namespace detfuse

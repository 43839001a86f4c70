#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "detfuse/features.hpp"
#include "detfuse/field.hpp"
#include "detfuse/geo.hpp"

namespace detfuse {

/// Planar area of interest spanning [0, width] x [0, height] in meters.
struct AoiSpec {
    double width_km = 200.0;
    double height_km = 200.0;

    double width_m() const { return width_km * 1000.0; }
    double height_m() const { return height_km * 1000.0; }
    double area_km2() const { return width_km * height_km; }
    bool contains(const Point& p) const {
        return p.x >= 0.0 && p.x <= width_m() && p.y >= 0.0 && p.y <= height_m();
    }
};

enum class PadKind : int { Empty = 0, Missile = 1, Tel = 2, TelGroup = 3 };

/// Launch-pad ring layout of a site and the occupancy mix of its pads.
struct PadSpec {
    double ring_radius_m = 60.0;
    int min_pads = 4;
    int max_pads = 6;
    // Relative weights for empty / missile / TEL / TEL-group occupancy.
    std::vector<double> occupancy_weights = {0.45, 0.2, 0.2, 0.15};
};

/// Detector behavior for one class: which grid it scans, how reliably it
/// fires on truth, and how its scores and positions are drawn.
struct DetectorSpec {
    std::string cls;
    double stride_m = 8.0;
    double alpha = 0.99;           // cut the pipeline will apply downstream
    double hit_rate = 0.9;         // per grid point inside a true object
    double score_lo = 0.99;        // true-positive score range
    double score_hi = 1.0;
    double jitter_sigma_m = 1.0;   // localization noise
    double footprint_radius_m = 10.0;  // grid points within this radius of a true object fire
};

/// False-positive behavior for one class: a homogeneous background process
/// plus concentrated hotspots.
struct ClutterSpec {
    std::string cls;
    double uniform_rate_per_km2 = 0.0;
    double uniform_score_lo = 0.9;
    double uniform_score_hi = 1.0;
    int hotspot_count = 0;
    double hotspot_mean_detections = 0.0;
    double hotspot_radius_m = 100.0;
    double hotspot_score_lo = 0.9;
    double hotspot_score_hi = 1.0;
    double hotspot_min_site_distance_m = 2000.0;
};

struct SiteTruth {
    std::int64_t id = 0;
    Point center;
    int pad_count = 0;
    std::vector<PadKind> pad_occupancy;
    std::vector<Point> pad_centers;
};

/// Full recipe for a reproducible synthetic scenario.
struct Scenario {
    std::uint64_t seed = 20260816;
    AoiSpec aoi;
    int site_count = 16;
    double site_margin_km = 15.0;  // keeps sites and their offsets inside the AOI
    PadSpec pads;
    std::vector<DetectorSpec> detectors;
    std::vector<ClutterSpec> clutter;
    double pseudo_negative_offset_m = 5000.0;
};

/// The tuned 16-site / 200x200 km scenario the end-to-end tests run on:
/// clutter makes the site-only candidate list mostly false positives while
/// component evidence cleanly separates the true sites.
Scenario default_scenario();

struct GeneratedScenario {
    std::map<std::string, DetectionField> fields;  // full (uncut) field per class
    std::vector<SiteTruth> sites;
    AoiSpec aoi;
};

/// Generate all detection fields and the truth table. Single-threaded with
/// one seeded generator: the same scenario always yields identical output.
GeneratedScenario generate(const Scenario& scenario);

/// Labeled training candidates: one positive per site center plus negatives
/// offset by offset_m in the four cardinal directions, dropped when they
/// fall outside the AOI.
std::vector<Candidate> make_training_set(const GeneratedScenario& gen, double offset_m);

}  // namespace detfuse

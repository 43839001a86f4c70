#include "detfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace detfuse {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

// Deterministic categorical draw by cumulative weights (kept independent of
// std::discrete_distribution's implementation-defined internals).
std::size_t pick_weighted(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (const double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("scenario: occupancy weights must sum > 0");
    const double u = uniform(rng, 0.0, total);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

Point jittered(std::mt19937_64& rng, const Point& p, double sigma_m) {
    if (sigma_m <= 0.0) return p;
    std::normal_distribution<double> n(0.0, sigma_m);
    const double dx = n(rng);
    const double dy = n(rng);
    return {p.x + dx, p.y + dy};
}

// Truth detections of one object: grid points of the class's scan stride
// strictly within the footprint radius fire with the configured hit rate.
void emit_object(std::mt19937_64& rng, const DetectorSpec& spec, const Point& center,
                 std::vector<RawDetection>& out) {
    const double r = spec.footprint_radius_m;
    const double s = spec.stride_m;
    const std::int64_t x0 = static_cast<std::int64_t>(std::ceil((center.x - r) / s));
    const std::int64_t x1 = static_cast<std::int64_t>(std::floor((center.x + r) / s));
    const std::int64_t y0 = static_cast<std::int64_t>(std::ceil((center.y - r) / s));
    const std::int64_t y1 = static_cast<std::int64_t>(std::floor((center.y + r) / s));
    for (std::int64_t gx = x0; gx <= x1; ++gx) {
        for (std::int64_t gy = y0; gy <= y1; ++gy) {
            const Point grid{static_cast<double>(gx) * s, static_cast<double>(gy) * s};
            const double dx = grid.x - center.x;
            const double dy = grid.y - center.y;
            if (dx * dx + dy * dy >= r * r) continue;
            if (uniform(rng, 0.0, 1.0) >= spec.hit_rate) continue;
            RawDetection det;
            det.location = jittered(rng, grid, spec.jitter_sigma_m);
            det.score = uniform(rng, spec.score_lo, spec.score_hi);
            out.push_back(det);
        }
    }
}

}  // namespace

Scenario default_scenario() {
    Scenario sc;
    sc.seed = 20260816;
    sc.aoi = {200.0, 200.0};
    sc.site_count = 16;
    sc.site_margin_km = 15.0;
    sc.pads = PadSpec{};

    sc.detectors = {
        // The site-scale detector sees the whole installation.
        {"site", 75.0, 0.9, 0.85, 0.9, 1.0, 5.0, 140.0},
        // Component detectors on the fine grid; pads are larger objects than
        // single vehicles/missiles.
        {"empty_lp", 8.0, 0.99, 0.9, 0.992, 1.0, 1.0, 10.0},
        {"combo_lp", 8.0, 0.99, 0.9, 0.992, 1.0, 1.0, 10.0},
        {"missile", 8.0, 0.99, 0.9, 0.992, 1.0, 1.0, 6.0},
        {"tel", 8.0, 0.99, 0.9, 0.992, 1.0, 1.0, 6.0},
        {"tel_group", 8.0, 0.99, 0.9, 0.992, 1.0, 1.0, 10.0},
    };

    sc.clutter = {
        // Site-scale clutter: sparse background singles plus hotspots whose
        // detection count matches a true site footprint, so false candidates
        // score in the same band as real sites and only component evidence
        // can tell them apart.
        {"site", 0.01, 0.85, 1.0, 120, 10.0, 130.0, 0.92, 1.0, 2000.0},
        // Component background; a handful of hotspots per class.
        {"empty_lp", 0.3, 0.95, 1.0, 10, 8.0, 20.0, 0.992, 1.0, 2000.0},
        {"combo_lp", 0.3, 0.95, 1.0, 10, 8.0, 20.0, 0.992, 1.0, 2000.0},
        {"missile", 0.3, 0.95, 1.0, 10, 8.0, 20.0, 0.992, 1.0, 2000.0},
        {"tel", 0.3, 0.95, 1.0, 10, 8.0, 20.0, 0.992, 1.0, 2000.0},
        {"tel_group", 0.3, 0.95, 1.0, 10, 8.0, 20.0, 0.992, 1.0, 2000.0},
    };
    return sc;
}

GeneratedScenario generate(const Scenario& scenario) {
    if (!(scenario.aoi.width_km > 0.0) || !(scenario.aoi.height_km > 0.0)) {
        throw std::invalid_argument("scenario: AOI area must be positive");
    }
    if (scenario.site_count < 0) {
        throw std::invalid_argument("scenario: negative site count");
    }
    if (scenario.pads.min_pads < 1 || scenario.pads.max_pads < scenario.pads.min_pads) {
        throw std::invalid_argument("scenario: bad pad count range");
    }

    std::mt19937_64 rng(scenario.seed);
    GeneratedScenario gen;
    gen.aoi = scenario.aoi;

    // Sites on a jittered grid inside the margins, row-major ids.
    const double margin = scenario.site_margin_km * 1000.0;
    const double usable_w = scenario.aoi.width_m() - 2.0 * margin;
    const double usable_h = scenario.aoi.height_m() - 2.0 * margin;
    if (scenario.site_count > 0 && (usable_w <= 0.0 || usable_h <= 0.0)) {
        throw std::invalid_argument("scenario: margins leave no room for sites");
    }
    const int grid = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(std::max(scenario.site_count, 1)))));
    const double cell_w = usable_w / grid;
    const double cell_h = usable_h / grid;
    for (int i = 0; i < scenario.site_count; ++i) {
        const int row = i / grid;
        const int col = i % grid;
        SiteTruth site;
        site.id = i;
        site.center.x = margin + (col + 0.5) * cell_w + uniform(rng, -0.25, 0.25) * cell_w;
        site.center.y = margin + (row + 0.5) * cell_h + uniform(rng, -0.25, 0.25) * cell_h;
        site.pad_count = scenario.pads.min_pads +
                         static_cast<int>(pick_weighted(
                             rng, std::vector<double>(static_cast<std::size_t>(
                                                          scenario.pads.max_pads -
                                                          scenario.pads.min_pads + 1),
                                                      1.0)));
        const double base_angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        for (int p = 0; p < site.pad_count; ++p) {
            const double angle = base_angle + 2.0 * std::numbers::pi * p / site.pad_count;
            site.pad_centers.push_back(
                {site.center.x + scenario.pads.ring_radius_m * std::cos(angle),
                 site.center.y + scenario.pads.ring_radius_m * std::sin(angle)});
            site.pad_occupancy.push_back(
                static_cast<PadKind>(pick_weighted(rng, scenario.pads.occupancy_weights)));
        }
        gen.sites.push_back(std::move(site));
    }

    // Truth detections, one detector at a time in spec order.
    for (const auto& spec : scenario.detectors) {
        if (!(spec.stride_m > 0.0)) {
            throw std::invalid_argument("scenario: stride must be positive for " + spec.cls);
        }
        DetectionField field;
        field.cls = spec.cls;
        field.model = DistanceModel{DistanceKind::PlanarEuclidean};
        field.stride_m = spec.stride_m;

        for (const auto& site : gen.sites) {
            if (spec.cls == "site") {
                emit_object(rng, spec, site.center, field.detections);
                continue;
            }
            for (int p = 0; p < site.pad_count; ++p) {
                const PadKind kind = site.pad_occupancy[p];
                const Point& pad = site.pad_centers[p];
                const bool occupied = kind != PadKind::Empty;
                if (spec.cls == "empty_lp" && !occupied) emit_object(rng, spec, pad, field.detections);
                if (spec.cls == "combo_lp" && occupied) emit_object(rng, spec, pad, field.detections);
                if (spec.cls == "missile" && kind == PadKind::Missile)
                    emit_object(rng, spec, pad, field.detections);
                if (spec.cls == "tel" && kind == PadKind::Tel)
                    emit_object(rng, spec, pad, field.detections);
                if (spec.cls == "tel_group" && kind == PadKind::TelGroup)
                    emit_object(rng, spec, pad, field.detections);
            }
        }
        gen.fields.emplace(spec.cls, std::move(field));
    }

    // Clutter: homogeneous background plus hotspots, in spec order.
    for (const auto& cl : scenario.clutter) {
        const auto it = gen.fields.find(cl.cls);
        if (it == gen.fields.end()) {
            throw std::invalid_argument("scenario: clutter class without a detector: " + cl.cls);
        }
        auto& dets = it->second.detections;

        if (cl.uniform_rate_per_km2 > 0.0) {
            std::poisson_distribution<int> count(cl.uniform_rate_per_km2 *
                                                 scenario.aoi.area_km2());
            const int n = count(rng);
            for (int i = 0; i < n; ++i) {
                RawDetection det;
                det.location.x = uniform(rng, 0.0, scenario.aoi.width_m());
                det.location.y = uniform(rng, 0.0, scenario.aoi.height_m());
                det.score = uniform(rng, cl.uniform_score_lo, cl.uniform_score_hi);
                dets.push_back(det);
            }
        }

        for (int h = 0; h < cl.hotspot_count; ++h) {
            Point center;
            bool placed = false;
            for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
                center.x = uniform(rng, 0.0, scenario.aoi.width_m());
                center.y = uniform(rng, 0.0, scenario.aoi.height_m());
                placed = true;
                for (const auto& site : gen.sites) {
                    if (distance(center, site.center,
                                 DistanceModel{DistanceKind::PlanarEuclidean}) <
                        cl.hotspot_min_site_distance_m) {
                        placed = false;
                        break;
                    }
                }
            }
            if (!placed) {
                throw std::invalid_argument(
                    "scenario: could not place a hotspot away from the sites");
            }
            std::poisson_distribution<int> count(cl.hotspot_mean_detections);
            const int n = count(rng);
            for (int i = 0; i < n; ++i) {
                const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
                const double radius = cl.hotspot_radius_m * std::sqrt(uniform(rng, 0.0, 1.0));
                RawDetection det;
                det.location.x = center.x + radius * std::cos(angle);
                det.location.y = center.y + radius * std::sin(angle);
                det.score = uniform(rng, cl.hotspot_score_lo, cl.hotspot_score_hi);
                dets.push_back(det);
            }
        }
    }

    // Sequential per-class ids in emission order.
    for (auto& [cls, field] : gen.fields) {
        for (std::size_t i = 0; i < field.detections.size(); ++i) {
            field.detections[i].id = static_cast<std::int64_t>(i);
        }
    }
    return gen;
}

std::vector<Candidate> make_training_set(const GeneratedScenario& gen, double offset_m) {
    if (!(offset_m > 0.0)) {
        throw std::invalid_argument("training set: offset must be positive");
    }
    std::vector<Candidate> out;
    const std::int64_t n = static_cast<std::int64_t>(gen.sites.size());
    for (const auto& site : gen.sites) {
        Candidate pos;
        pos.id = site.id;
        pos.location = site.center;
        pos.label = true;
        pos.source = CandidateSource::PseudoTrain;
        out.push_back(pos);

        const Point offsets[4] = {
            {site.center.x + offset_m, site.center.y},  // east
            {site.center.x - offset_m, site.center.y},  // west
            {site.center.x, site.center.y + offset_m},  // north
            {site.center.x, site.center.y - offset_m},  // south
        };
        for (int k = 0; k < 4; ++k) {
            if (!gen.aoi.contains(offsets[k])) continue;
            Candidate neg;
            neg.id = n + site.id * 4 + k;
            neg.location = offsets[k];
            neg.label = false;
            neg.source = CandidateSource::PseudoTrain;
            out.push_back(neg);
        }
    }
    return out;
}

}  // namespace detfuse

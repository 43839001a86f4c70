#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "detfuse/geo.hpp"
#include "detfuse/reference.hpp"

using namespace detfuse;

namespace {

const DistanceModel kPlanar{DistanceKind::PlanarEuclidean, kEarthRadiusM};
const DistanceModel kSphere{DistanceKind::HaversineSphere, kEarthRadiusM};

}  // namespace

TEST_CASE("planar distance: 3-4-5 triangle") {
    CHECK(distance({0.0, 0.0}, {3.0, 4.0}, kPlanar) == 5.0);
    CHECK(distance({-3.0, 0.0}, {0.0, -4.0}, kPlanar) == 5.0);
}

TEST_CASE("distance of a point to itself is zero") {
    CHECK(distance({10.0, 20.0}, {10.0, 20.0}, kPlanar) == 0.0);
    CHECK(distance({10.0, 20.0}, {10.0, 20.0}, kSphere) == 0.0);
}

TEST_CASE("haversine: small latitude displacement equals arc length") {
    // For a pure latitude change the haversine reduces to R * dlat exactly.
    const double d = distance({30.0, 0.0}, {30.0, 0.001}, kSphere);
    const double expected = kEarthRadiusM * 0.001 * std::numbers::pi / 180.0;
    CHECK(d == doctest::Approx(expected).epsilon(1e-12));
    CHECK(d == doctest::Approx(111.195).epsilon(1e-5));
}

TEST_CASE("distance is symmetric") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> lat(-85.0, 85.0);
    for (int i = 0; i < 200; ++i) {
        const Point a{lon(rng), lat(rng)};
        const Point b{lon(rng), lat(rng)};
        CHECK(distance(a, b, kPlanar) == distance(b, a, kPlanar));
        CHECK(distance(a, b, kSphere) == distance(b, a, kSphere));
    }
}

TEST_CASE("planar triangle inequality on random triples") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double ab = distance(a, b, kPlanar);
        const double bc = distance(b, c, kPlanar);
        const double ac = distance(a, c, kPlanar);
        CHECK(ac <= ab + bc + 1e-6);
    }
}

TEST_CASE("haversine never exceeds half the great circle") {
    const double bound = std::numbers::pi * kEarthRadiusM;
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> lat(-90.0, 90.0);
    for (int i = 0; i < 500; ++i) {
        const Point a{lon(rng), lat(rng)};
        const Point b{lon(rng), lat(rng)};
        CHECK(distance(a, b, kSphere) <= bound * (1.0 + 1e-12));
    }
    // Exactly antipodal points sit at the bound.
    CHECK(distance({0.0, 0.0}, {180.0, 0.0}, kSphere) ==
          doctest::Approx(bound).epsilon(1e-12));
}

TEST_CASE("distance rejects non-finite coordinates and bad sphere radius") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(distance({nan, 0.0}, {0.0, 0.0}, kPlanar), std::invalid_argument);
    CHECK_THROWS_AS(distance({0.0, 0.0}, {0.0, nan}, kSphere), std::invalid_argument);
    CHECK_THROWS_AS(distance({0.0, 0.0}, {1.0, 1.0},
                             DistanceModel{DistanceKind::HaversineSphere, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("radius query boundary is strict") {
    std::vector<IndexedPoint> pts = {
        {{10.0, 0.0}, 0},
        {{10.0 - 1e-9, 0.0}, 1},
        {{0.0, 0.0}, 2},
    };
    const SpatialIndex index(pts, kPlanar, 10.0);
    const auto ids = index.query_ids({0.0, 0.0}, 10.0);
    // The point exactly at the radius is excluded.
    CHECK(ids == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("radius query hits come sorted by distance then id") {
    std::vector<IndexedPoint> pts = {
        {{3.0, 0.0}, 7},
        {{0.0, 3.0}, 3},  // same distance as id 7, lower id
        {{1.0, 0.0}, 9},
    };
    const SpatialIndex index(pts, kPlanar, 5.0);
    const auto hits = index.query({0.0, 0.0}, 5.0);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].id == 9);
    CHECK(hits[1].id == 3);
    CHECK(hits[2].id == 7);
}

TEST_CASE("index query matches the linear scan on random planar fields") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 5000.0);
    std::uniform_real_distribution<double> r(1.0, 800.0);

    std::vector<IndexedPoint> pts;
    for (int i = 0; i < 1000; ++i) pts.push_back({{u(rng), u(rng)}, i});
    // A tight clump to exercise dense cells.
    for (int i = 0; i < 50; ++i) pts.push_back({{2500.0 + i * 0.01, 2500.0}, 1000 + i});

    const SpatialIndex index(pts, kPlanar, 200.0);
    for (int q = 0; q < 100; ++q) {
        const Point center{u(rng), u(rng)};
        const double radius = r(rng);
        const auto fast = index.query(center, radius);
        const auto slow = serial::radius_query(pts, center, radius, kPlanar);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i].id == slow[i].id);
            CHECK(fast[i].distance_m == slow[i].distance_m);
        }
    }
}

TEST_CASE("index query matches the linear scan on a spherical field") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> lat(-60.0, 60.0);
    std::uniform_real_distribution<double> r(100.0, 500000.0);

    std::vector<IndexedPoint> pts;
    for (int i = 0; i < 800; ++i) pts.push_back({{lon(rng), lat(rng)}, i});
    // Points hugging the antimeridian on both sides.
    for (int i = 0; i < 40; ++i) {
        pts.push_back({{179.99 - i * 0.001, 10.0 + i * 0.01}, 800 + i});
        pts.push_back({{-179.99 + i * 0.001, 10.0 + i * 0.01}, 840 + i});
    }

    const SpatialIndex index(pts, kSphere, 50000.0);
    for (int q = 0; q < 60; ++q) {
        const Point center{lon(rng), lat(rng)};
        const double radius = r(rng);
        const auto fast = index.query(center, radius);
        const auto slow = serial::radius_query(pts, center, radius, kSphere);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i].id == slow[i].id);
            CHECK(fast[i].distance_m == slow[i].distance_m);
        }
    }
    // Queries centered on the antimeridian must see both sides.
    const auto wrap = index.query_ids({179.995, 10.1}, 20000.0);
    bool east = false, west = false;
    for (const auto id : wrap) {
        if (id >= 840) west = true;
        else if (id >= 800) east = true;
    }
    CHECK(east);
    CHECK(west);
}

TEST_CASE("index construction and query reject bad parameters") {
    CHECK_THROWS_AS(SpatialIndex({}, kPlanar, 0.0), std::invalid_argument);
    const SpatialIndex index({{{0.0, 0.0}, 0}}, kPlanar, 10.0);
    CHECK_THROWS_AS(index.query({0.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(index.query({0.0, 0.0}, -5.0), std::invalid_argument);
}

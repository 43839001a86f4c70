// Benchmark of the indexed OpenMP kernels against the serial brute-force
// reference. Both paths must produce identical results (the comparison is
// part of the run), so the timings compare equivalent work.
//
// Usage: bench_kernels [max_detections]   (default 20000)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "detfuse/cluster.hpp"
#include "detfuse/field.hpp"
#include "detfuse/geo.hpp"
#include "detfuse/reference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace detfuse;

namespace {

constexpr double kRadiusM = 100.0;
constexpr double kTargetNeighbors = 30.0;  // mean neighbors per detection

DetectionField random_field(int n, std::mt19937_64& rng) {
    // Square sized so the expected neighbor count inside the radius stays
    // constant as n grows: area = n * pi R^2 / target.
    const double side = std::sqrt(n * 3.141592653589793 * kRadiusM * kRadiusM /
                                  kTargetNeighbors);
    std::uniform_real_distribution<double> coord(0.0, side);
    std::uniform_real_distribution<double> score(0.5, 1.0);
    DetectionField f;
    f.cls = "site";
    f.stride_m = 8.0;
    f.detections.reserve(n);
    for (int i = 0; i < n; ++i) {
        f.detections.push_back({i, {coord(rng), coord(rng)}, score(rng), -1});
    }
    return f;
}

template <typename F>
double time_ms(F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same_deltas(const std::vector<AmplifiedDetection>& a,
                 const std::vector<AmplifiedDetection>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].id != b[i].id || a[i].delta != b[i].delta) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int max_n = argc > 1 ? std::atoi(argv[1]) : 20000;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif

    std::printf("\namplify: indexed + parallel vs serial O(n^2)\n");
    std::printf("%10s %14s %14s %10s %8s\n", "n", "indexed (ms)", "serial (ms)", "speedup",
                "equal");
    std::mt19937_64 rng(42);
    bool all_equal = true;
    for (int n = 2000; n <= max_n; n *= 2) {
        const DetectionField f = random_field(n, rng);
        std::vector<AmplifiedDetection> fast, slow;
        const double t_fast = time_ms([&] { fast = amplify(f, kRadiusM); });
        const double t_slow = time_ms([&] { slow = serial::amplify(f, kRadiusM); });
        const bool equal = same_deltas(fast, slow);
        all_equal = all_equal && equal;
        std::printf("%10d %14.2f %14.2f %9.1fx %8s\n", n, t_fast, t_slow, t_slow / t_fast,
                    equal ? "yes" : "NO");
    }

    std::printf("\nradius queries: grid index vs linear scan (1000 queries)\n");
    std::printf("%10s %14s %14s %10s %8s\n", "n", "indexed (ms)", "serial (ms)", "speedup",
                "equal");
    for (int n = 2000; n <= max_n; n *= 2) {
        const DetectionField f = random_field(n, rng);
        std::vector<IndexedPoint> points;
        points.reserve(f.detections.size());
        for (const auto& d : f.detections) points.push_back({d.location, d.id});
        const SpatialIndex index(points, f.model, kRadiusM);

        std::vector<Point> centers;
        std::mt19937_64 qrng(7);
        std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
        for (int q = 0; q < 1000; ++q) centers.push_back(points[pick(qrng)].pt);

        std::size_t fast_total = 0, slow_total = 0;
        bool equal = true;
        const double t_fast = time_ms([&] {
            for (const auto& cpt : centers) fast_total += index.query(cpt, kRadiusM).size();
        });
        const double t_slow = time_ms([&] {
            for (const auto& cpt : centers) {
                slow_total += serial::radius_query(points, cpt, kRadiusM, f.model).size();
            }
        });
        for (int q = 0; q < 50 && equal; ++q) {  // spot-check full result equality
            const auto a = index.query(centers[q], kRadiusM);
            const auto b = serial::radius_query(points, centers[q], kRadiusM, f.model);
            equal = a.size() == b.size();
            for (std::size_t i = 0; equal && i < a.size(); ++i) {
                equal = a[i].id == b[i].id && a[i].distance_m == b[i].distance_m;
            }
        }
        equal = equal && fast_total == slow_total;
        all_equal = all_equal && equal;
        std::printf("%10d %14.2f %14.2f %9.1fx %8s\n", n, t_fast, t_slow, t_slow / t_fast,
                    equal ? "yes" : "NO");
    }

    std::printf("\ncluster_field: indexed vs serial (amplified random field)\n");
    std::printf("%10s %14s %14s %10s %8s\n", "n", "indexed (ms)", "serial (ms)", "speedup",
                "equal");
    for (int n = 2000; n <= max_n; n *= 2) {
        const DetectionField f = random_field(n, rng);
        const auto deltas = amplify(f, kRadiusM);
        ClusterParams params;
        params.radius_m = kRadiusM;
        params.alpha = 0.5;
        params.stride_m = f.stride_m;
        std::vector<Cluster> fast, slow;
        const double t_fast = time_ms([&] { fast = cluster_field(f, deltas, params); });
        const double t_slow = time_ms([&] { slow = serial::cluster_field(f, deltas, params); });
        bool equal = fast.size() == slow.size();
        for (std::size_t i = 0; equal && i < fast.size(); ++i) {
            equal = fast[i].seed_id == slow[i].seed_id && fast[i].score == slow[i].score;
        }
        all_equal = all_equal && equal;
        std::printf("%10d %14.2f %14.2f %9.1fx %8s\n", n, t_fast, t_slow, t_slow / t_fast,
                    equal ? "yes" : "NO");
    }

    if (!all_equal) {
        std::printf("\nFAILURE: the kernels disagree with the serial reference\n");
        return 1;
    }
    return 0;
}

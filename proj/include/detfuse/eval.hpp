#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace detfuse {

/// Confusion counts with the derived rates. tn is -1 when not tracked.
struct Metrics {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = -1;
    double tpr = 0.0;
    double ppv = 0.0;
    double f1 = 0.0;
    std::optional<double> error_density;             // (FP+FN) per km^2
    std::optional<double> relative_error_reduction;  // vs a baseline
    std::optional<double> avg_tp_rank;
};

/// Rates from raw counts. F1 is the undefined-safe 2TP/(2TP+FP+FN), 0 when
/// no TP exists.
Metrics confusion_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                              std::int64_t tn = -1);

/// Exact confusion of (id, decision) against (id, truth). Both sides must
/// cover the same id set; throws on a mismatch.
Metrics confusion(const std::vector<std::pair<std::int64_t, bool>>& decisions,
                  const std::vector<std::pair<std::int64_t, bool>>& truth);

/// (FP+FN) / area. Throws on area <= 0.
double error_density(const Metrics& m, double area_km2);

/// 1 - errors/baseline-errors; the area cancels. Throws when the baseline
/// has no errors.
double relative_error_reduction(const Metrics& m, const Metrics& baseline);

}  // namespace detfuse

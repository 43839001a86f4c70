#include "detfuse/dta.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace detfuse {

namespace {

struct Tagged {
    double value;
    bool label;
};

// Sweep shared by fit_threshold and sweep_curve. Sorting by value and
// walking from the largest candidate down gives every confusion count from
// suffix sums in one pass.
std::vector<SweepPoint> sweep(const std::vector<double>& values,
                              const std::vector<bool>& labels) {
    if (values.empty() || values.size() != labels.size()) {
        throw std::invalid_argument("threshold fit: values and labels must align and be nonempty");
    }
    std::int64_t positives = 0;
    for (const bool l : labels) positives += l ? 1 : 0;
    if (positives == 0) {
        throw std::invalid_argument("threshold fit: no positive labels, F1 undefined");
    }

    std::vector<Tagged> data(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) data[i] = {values[i], labels[i]};
    std::sort(data.begin(), data.end(),
              [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

    // One row per distinct value, ascending. At t = data[i].value the
    // predicted positives are the suffix starting at the first element with
    // that value.
    std::vector<SweepPoint> curve;
    std::int64_t suffix_total = static_cast<std::int64_t>(data.size());
    std::int64_t suffix_pos = positives;

    std::size_t i = 0;
    while (i < data.size()) {
        const double t = data[i].value;
        const std::int64_t tp = suffix_pos;
        const std::int64_t fp = suffix_total - suffix_pos;
        const std::int64_t fn = positives - tp;

        SweepPoint pt;
        pt.threshold = t;
        pt.tpr = static_cast<double>(tp) / static_cast<double>(positives);
        pt.ppv = suffix_total > 0 ? static_cast<double>(tp) / static_cast<double>(suffix_total) : 0.0;
        pt.f1 = (2 * tp + fp + fn) > 0
                    ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn)
                    : 0.0;
        curve.push_back(pt);

        // Consume the tie group of this value before moving to the next
        // distinct threshold.
        while (i < data.size() && data[i].value == t) {
            suffix_pos -= data[i].label ? 1 : 0;
            --suffix_total;
            ++i;
        }
    }

    return curve;
}

}  // namespace

DtaThreshold fit_threshold(const std::vector<double>& values, const std::vector<bool>& labels) {
    const auto curve = sweep(values, labels);
    // Max F1; ties resolved toward the largest threshold, i.e. the latest
    // point of an ascending curve. The reject-everything candidate (max+1)
    // scores F1 = 0 and can never beat the curve minimum, whose F1 is
    // positive whenever a positive label exists, so it needs no explicit row.
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].f1 >= curve[best].f1) best = i;
    }
    DtaThreshold out;
    out.threshold = curve[best].threshold;
    out.f1 = curve[best].f1;
    out.tpr = curve[best].tpr;
    out.ppv = curve[best].ppv;
    return out;
}

std::vector<SweepPoint> sweep_curve(const std::vector<double>& values,
                                    const std::vector<bool>& labels) {
    return sweep(values, labels);
}

}  // namespace detfuse

#include "detfuse/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace detfuse {

Metrics confusion_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                              std::int64_t tn) {
    if (tp < 0 || fp < 0 || fn < 0) {
        throw std::invalid_argument("confusion: negative count");
    }
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    m.tpr = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.ppv = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.f1 = (2 * tp + fp + fn) > 0
               ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn)
               : 0.0;
    return m;
}

Metrics confusion(const std::vector<std::pair<std::int64_t, bool>>& decisions,
                  const std::vector<std::pair<std::int64_t, bool>>& truth) {
    if (decisions.size() != truth.size()) {
        throw std::invalid_argument("confusion: decision and truth id sets differ in size");
    }
    auto dec = decisions;
    auto tru = truth;
    const auto by_id = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(dec.begin(), dec.end(), by_id);
    std::sort(tru.begin(), tru.end(), by_id);

    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        if (dec[i].first != tru[i].first) {
            throw std::invalid_argument("confusion: decision and truth id sets do not match");
        }
        const bool d = dec[i].second, t = tru[i].second;
        if (d && t) ++tp;
        else if (d && !t) ++fp;
        else if (!d && t) ++fn;
        else ++tn;
    }
    return confusion_from_counts(tp, fp, fn, tn);
}

double error_density(const Metrics& m, double area_km2) {
    if (!(area_km2 > 0.0)) {
        throw std::invalid_argument("error_density: area must be positive");
    }
    return static_cast<double>(m.fp + m.fn) / area_km2;
}

double relative_error_reduction(const Metrics& m, const Metrics& baseline) {
    const std::int64_t base_errors = baseline.fp + baseline.fn;
    if (base_errors <= 0) {
        throw std::invalid_argument("relative_error_reduction: baseline has no errors");
    }
    return 1.0 - static_cast<double>(m.fp + m.fn) / static_cast<double>(base_errors);
}

}  // namespace detfuse

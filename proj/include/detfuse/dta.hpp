#pragma once

#include <string>
#include <vector>

namespace detfuse {

/// An F1-optimal decision threshold. The decision rule is value >= threshold
/// -> positive. Achieved stats are measured on the fitting data.
struct DtaThreshold {
    std::string cls;
    std::string feature_type;
    double threshold = 0.0;
    double f1 = 0.0;
    double tpr = 0.0;
    double ppv = 0.0;
};

/// One row of a threshold sweep.
struct SweepPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double ppv = 0.0;
    double f1 = 0.0;
};

/// Pick the threshold maximizing F1 of the rule (v >= t) over the candidate
/// set {distinct values} + {max+1}; among F1 ties the LARGEST threshold wins
/// (fewest predicted positives). cls/feature_type of the result are left
/// empty for the caller to fill. Throws when labels hold no positive (F1
/// undefined) or the inputs are misaligned/empty.
DtaThreshold fit_threshold(const std::vector<double>& values, const std::vector<bool>& labels);

/// Operating point of (v >= t) at every distinct observed value, thresholds
/// ascending. TPR is monotone non-increasing along the curve.
std::vector<SweepPoint> sweep_curve(const std::vector<double>& values,
                                    const std::vector<bool>& labels);

}  // namespace detfuse

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "detfuse/eval.hpp"

using namespace detfuse;

namespace {

/// Round to two decimals the way the percentages are reported.
double pct2(double rate) { return std::round(rate * 10000.0) / 100.0; }

}  // namespace

TEST_CASE("rates from counts reproduce the reference operating points") {
    // Site scan without decision fusion: every real site found, buried in
    // false alarms.
    const auto base = confusion_from_counts(16, 338, 0);
    CHECK(base.tpr == 1.0);
    CHECK(pct2(base.ppv) == 4.52);
    CHECK(pct2(base.f1) == 8.65);

    // Decision fusion keeps 15 of 16 at a fraction of the false alarms.
    const auto fused = confusion_from_counts(15, 11, 1);
    CHECK(pct2(fused.tpr) == 93.75);
    CHECK(pct2(fused.ppv) == 57.69);
    CHECK(pct2(fused.f1) == 71.43);
    CHECK(pct2(relative_error_reduction(fused, base)) == 96.45);

    // The all-sites operating point of the same fusion family.
    const auto all = confusion_from_counts(16, 39, 0);
    CHECK(all.tpr == 1.0);
    CHECK(pct2(all.ppv) == 29.09);
    CHECK(pct2(all.f1) == 45.07);
    CHECK(pct2(relative_error_reduction(all, base)) == 88.46);
}

TEST_CASE("error density is errors per square kilometer") {
    const auto m = confusion_from_counts(10, 1, 1);
    CHECK(error_density(m, 200.0) == 0.01);
    CHECK_THROWS_AS(error_density(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(error_density(m, -5.0), std::invalid_argument);
}

TEST_CASE("error reduction from counts equals the density form on any area") {
    const auto base = confusion_from_counts(16, 338, 0);
    const auto m = confusion_from_counts(15, 11, 1);
    const double area = 123.456;
    const double from_density = 1.0 - error_density(m, area) / error_density(base, area);
    CHECK(relative_error_reduction(m, base) ==
          doctest::Approx(from_density).epsilon(1e-12));
    CHECK_THROWS_AS(relative_error_reduction(m, confusion_from_counts(5, 0, 0)),
                    std::invalid_argument);
}

TEST_CASE("confusion matches decisions to truth by id") {
    const std::vector<std::pair<std::int64_t, bool>> decisions = {
        {3, true}, {1, false}, {2, true}, {0, false}, {4, true}};
    const std::vector<std::pair<std::int64_t, bool>> truth = {
        {0, false}, {1, true}, {2, true}, {3, false}, {4, true}};
    const auto m = confusion(decisions, truth);
    CHECK(m.tp == 2);  // ids 2, 4
    CHECK(m.fp == 1);  // id 3
    CHECK(m.fn == 1);  // id 1
    CHECK(m.tn == 1);  // id 0
    CHECK(m.tpr == 2.0 / 3.0);
    CHECK(m.ppv == 2.0 / 3.0);

    CHECK_THROWS_AS(confusion(decisions, {{0, false}}), std::invalid_argument);
    auto wrong_ids = truth;
    wrong_ids[4].first = 99;
    CHECK_THROWS_AS(confusion(decisions, wrong_ids), std::invalid_argument);
}

TEST_CASE("F1 is the harmonic mean of precision and recall") {
    struct Counts {
        int tp, fp, fn;
    };
    for (const auto& c : {Counts{5, 3, 2}, Counts{1, 9, 4}, Counts{16, 39, 0}, Counts{7, 0, 0}}) {
        const auto m = confusion_from_counts(c.tp, c.fp, c.fn);
        const double harmonic = 2.0 * m.ppv * m.tpr / (m.ppv + m.tpr);
        CHECK(m.f1 == doctest::Approx(harmonic).epsilon(1e-12));
    }
}

TEST_CASE("degenerate confusions stay defined and negatives throw") {
    const auto none = confusion_from_counts(0, 0, 0);
    CHECK(none.tpr == 0.0);
    CHECK(none.ppv == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK(none.tn == -1);  // untracked by default

    const auto all_missed = confusion_from_counts(0, 0, 7);
    CHECK(all_missed.tpr == 0.0);
    CHECK(all_missed.f1 == 0.0);

    CHECK(confusion_from_counts(1, 2, 3, 4).tn == 4);

    CHECK_THROWS_AS(confusion_from_counts(-1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(confusion_from_counts(0, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(confusion_from_counts(0, 0, -1), std::invalid_argument);
}

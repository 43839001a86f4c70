#include "detfuse/fusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace detfuse {

FeatureVector normalize_inputs(const FeatureVector& v, const NormalizationSpec& spec) {
    if (v.classes != spec.classes) {
        throw std::invalid_argument("normalize_inputs: class sets do not match");
    }
    if (v.values.size() != spec.thresholds.size()) {
        throw std::invalid_argument("normalize_inputs: width mismatch");
    }
    FeatureVector out = v;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double t = spec.thresholds[i];
        if (!(t > 0.0)) {
            throw std::invalid_argument("normalize_inputs: threshold for class " +
                                        spec.classes[i] + " must be positive");
        }
        out.values[i] = std::clamp((v.values[i] - t) / t, -1.0, 1.0);
    }
    return out;
}

bool or_gate(const std::vector<bool>& decisions) {
    if (decisions.empty()) {
        throw std::invalid_argument("or_gate: empty input");
    }
    for (const bool d : decisions) {
        if (d) return true;
    }
    return false;
}

Combo combo_from_string(const std::string& name) {
    if (name == "empty+3") return Combo::EmptyPlus3;
    if (name == "combo+3") return Combo::ComboPlus3;
    if (name == "all5") return Combo::All5;
    throw std::invalid_argument("unknown combo: " + name);
}

std::string to_string(Combo combo) {
    switch (combo) {
        case Combo::EmptyPlus3: return "empty+3";
        case Combo::ComboPlus3: return "combo+3";
        case Combo::All5: return "all5";
    }
    return "all5";
}

std::vector<std::string> combo_classes(Combo combo) {
    switch (combo) {
        case Combo::EmptyPlus3: return {"empty_lp", "missile", "tel", "tel_group"};
        case Combo::ComboPlus3: return {"combo_lp", "missile", "tel", "tel_group"};
        case Combo::All5: return {"empty_lp", "combo_lp", "missile", "tel", "tel_group"};
    }
    return {};
}

FusionModelKind fusion_model_from_string(const std::string& name) {
    if (name == "or") return FusionModelKind::OrGate;
    if (name == "mlp") return FusionModelKind::Mlp;
    if (name == "anfis") return FusionModelKind::Anfis;
    throw std::invalid_argument("unknown fusion model: " + name);
}

std::string to_string(FusionModelKind kind) {
    switch (kind) {
        case FusionModelKind::OrGate: return "or";
        case FusionModelKind::Mlp: return "mlp";
        case FusionModelKind::Anfis: return "anfis";
    }
    return "or";
}

std::vector<FeatureVector> make_feature_vectors(const std::vector<CandidateFeatures>& features,
                                                Combo combo, FeatureType type) {
    const auto classes = combo_classes(combo);
    std::vector<FeatureVector> out;
    out.reserve(features.size());
    for (const auto& f : features) {
        FeatureVector v;
        v.candidate_id = f.candidate_id;
        v.classes = classes;
        v.values.reserve(classes.size());
        for (const auto& cls : classes) {
            v.values.push_back(feature_value(class_features(f, cls), type));
        }
        if (f.label.has_value()) {
            v.labeled = true;
            v.label = *f.label;
        }
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

NormalizationSpec spec_from(const FusionModel& m) {
    NormalizationSpec spec;
    spec.classes = m.classes;
    spec.thresholds.reserve(m.thresholds.size());
    for (const auto& t : m.thresholds) spec.thresholds.push_back(t.threshold);
    return spec;
}

void check_vector(const FusionModel& m, const FeatureVector& v) {
    if (v.classes != m.classes) {
        throw std::invalid_argument("fusion: candidate classes do not match the model");
    }
    if (v.values.size() != v.classes.size()) {
        throw std::invalid_argument("fusion: values not aligned with classes");
    }
    if (m.thresholds.size() != m.classes.size()) {
        throw std::invalid_argument("fusion: thresholds not aligned with classes");
    }
}

}  // namespace

FusionModel train_fusion(const std::vector<FeatureVector>& train, FusionModelKind kind,
                         Combo combo, FeatureType type, const MlpConfig& mlp_config,
                         const AnfisConfig& anfis_config) {
    if (train.empty()) {
        throw std::invalid_argument("train_fusion: empty training set");
    }
    const auto classes = combo_classes(combo);
    std::vector<bool> labels;
    labels.reserve(train.size());
    for (const auto& v : train) {
        if (v.classes != classes) {
            throw std::invalid_argument("train_fusion: training vector classes do not match combo");
        }
        if (!v.labeled) {
            throw std::invalid_argument("train_fusion: unlabeled training vector");
        }
        labels.push_back(v.label);
    }

    FusionModel m;
    m.kind = kind;
    m.combo = combo;
    m.feature_type = type;
    m.classes = classes;

    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<double> values;
        values.reserve(train.size());
        for (const auto& v : train) values.push_back(v.values[c]);
        DtaThreshold t = fit_threshold(values, labels);
        t.cls = classes[c];
        t.feature_type = to_string(type);
        m.thresholds.push_back(std::move(t));
    }

    if (kind == FusionModelKind::Mlp) {
        const NormalizationSpec spec = spec_from(m);
        std::vector<std::vector<double>> xs;
        xs.reserve(train.size());
        for (const auto& v : train) {
            xs.push_back(m.normalize ? normalize_inputs(v, spec).values : v.values);
        }
        m.mlp = train_mlp(xs, labels, mlp_config);
    } else if (kind == FusionModelKind::Anfis) {
        std::vector<std::vector<double>> xs;
        xs.reserve(train.size());
        for (const auto& v : train) xs.push_back(v.values);
        std::vector<double> thresholds;
        for (const auto& t : m.thresholds) thresholds.push_back(t.threshold);
        m.anfis = train_anfis(xs, labels, classes, thresholds, anfis_config);
    }
    return m;
}

double fusion_score(const FusionModel& m, const FeatureVector& v) {
    check_vector(m, v);
    switch (m.kind) {
        case FusionModelKind::OrGate: {
            int votes = 0;
            for (std::size_t i = 0; i < v.values.size(); ++i) {
                if (v.values[i] >= m.thresholds[i].threshold) ++votes;
            }
            return static_cast<double>(votes);
        }
        case FusionModelKind::Mlp: {
            if (!m.mlp.has_value()) throw std::invalid_argument("fusion: model has no MLP");
            const auto x = m.normalize ? normalize_inputs(v, spec_from(m)).values : v.values;
            return predict_mlp(*m.mlp, x);
        }
        case FusionModelKind::Anfis: {
            if (!m.anfis.has_value()) throw std::invalid_argument("fusion: model has no ANFIS");
            return anfis_forward(*m.anfis, v.values);
        }
    }
    return 0.0;
}

bool fusion_decision(const FusionModel& m, const FeatureVector& v) {
    const double score = fusion_score(m, v);
    switch (m.kind) {
        case FusionModelKind::OrGate: return score >= 1.0;
        case FusionModelKind::Mlp: return score >= m.mlp_decision_threshold;
        case FusionModelKind::Anfis: return score >= m.anfis->output_threshold;
    }
    return false;
}

std::vector<DecisionRecord> fuse_candidates(const std::vector<FeatureVector>& candidates,
                                            const FusionModel& m) {
    // Validate up front: the parallel loop below must not throw.
    for (const auto& v : candidates) check_vector(m, v);
    if (m.kind == FusionModelKind::Mlp &&
        (!m.mlp.has_value() || m.mlp->layer_sizes.front() != m.classes.size())) {
        throw std::invalid_argument("fusion: model has no MLP of matching width");
    }
    if (m.kind == FusionModelKind::Anfis &&
        (!m.anfis.has_value() || m.anfis->classes.size() != m.classes.size())) {
        throw std::invalid_argument("fusion: model has no ANFIS of matching width");
    }
    if (m.kind == FusionModelKind::Mlp && m.normalize) {
        for (const auto& t : m.thresholds) {
            if (!(t.threshold > 0.0)) {
                throw std::invalid_argument("fusion: rescaling threshold for class " + t.cls +
                                            " must be positive");
            }
        }
    }

    std::vector<DecisionRecord> records(candidates.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(candidates.size()); ++i) {
        DecisionRecord r;
        r.candidate_id = candidates[i].candidate_id;
        r.score = fusion_score(m, candidates[i]);
        switch (m.kind) {
            case FusionModelKind::OrGate: r.decision = r.score >= 1.0; break;
            case FusionModelKind::Mlp: r.decision = r.score >= m.mlp_decision_threshold; break;
            case FusionModelKind::Anfis: r.decision = r.score >= m.anfis->output_threshold; break;
        }
        r.model = to_string(m.kind);
        r.combo = to_string(m.combo);
        r.feature_type = to_string(m.feature_type);
        records[i] = std::move(r);
    }
    return records;
}

std::vector<std::int64_t> kept_ids(const std::vector<DecisionRecord>& records) {
    std::vector<std::int64_t> ids;
    for (const auto& r : records) {
        if (r.decision) ids.push_back(r.candidate_id);
    }
    return ids;
}

}  // namespace detfuse

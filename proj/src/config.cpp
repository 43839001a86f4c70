#include "detfuse/config.hpp"

#include <set>
#include <utility>

#include "detfuse/errors.hpp"
#include "detfuse/io.hpp"

namespace detfuse {

namespace {

std::string to_string(DistanceKind kind) {
    return kind == DistanceKind::PlanarEuclidean ? "planar-euclidean" : "haversine-sphere";
}

DistanceKind distance_kind_from_string(const std::string& name) {
    if (name == "planar-euclidean") return DistanceKind::PlanarEuclidean;
    if (name == "haversine-sphere") return DistanceKind::HaversineSphere;
    throw std::invalid_argument("unknown distance kind: " + name);
}

/// Reads recognized keys out of one JSON object, remembering which were
/// touched; finish() reports the rest as unknown. Wrong types and
/// unparsable enum names land in the same offending-key list.
class Section {
public:
    Section(const nlohmann::json& j, std::string prefix, std::vector<std::string>& bad)
        : j_(&j), prefix_(std::move(prefix)), bad_(&bad) {}

    template <class T>
    void read(const char* key, T& out) {
        if (!mark(key)) return;
        try {
            out = j_->at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            bad_->push_back(path(key));
        }
    }

    template <class T, class Parse>
    void read_enum(const char* key, T& out, Parse parse) {
        if (!mark(key)) return;
        try {
            out = parse(j_->at(key).get<std::string>());
        } catch (const std::exception&) {
            bad_->push_back(path(key));
        }
    }

    const nlohmann::json* object(const char* key) {
        if (!mark(key)) return nullptr;
        const auto& v = j_->at(key);
        if (!v.is_object()) {
            bad_->push_back(path(key));
            return nullptr;
        }
        return &v;
    }

    const nlohmann::json* array(const char* key) {
        if (!mark(key)) return nullptr;
        const auto& v = j_->at(key);
        if (!v.is_array()) {
            bad_->push_back(path(key));
            return nullptr;
        }
        return &v;
    }

    void finish() {
        for (const auto& item : j_->items()) {
            if (!seen_.count(item.key())) bad_->push_back(prefix_ + item.key());
        }
    }

    std::string path(const char* key) const { return prefix_ + key; }

private:
    bool mark(const char* key) {
        seen_.insert(key);
        return j_->contains(key);
    }

    const nlohmann::json* j_;
    std::string prefix_;
    std::vector<std::string>* bad_;
    std::set<std::string> seen_;
};

void read_stage(const nlohmann::json& j, const std::string& prefix, StageConfig& stage,
                std::vector<std::string>& bad) {
    Section s(j, prefix, bad);
    s.read("alpha", stage.alpha);
    s.read("radius_m", stage.radius_m);
    s.read("stride_m", stage.stride_m);
    s.read_enum("penalty", stage.penalty, penalty_mode_from_string);
    s.finish();
}

DetectorSpec read_detector(const nlohmann::json& j, const std::string& prefix,
                           std::vector<std::string>& bad) {
    DetectorSpec d;
    Section s(j, prefix, bad);
    s.read("class", d.cls);
    s.read("stride_m", d.stride_m);
    s.read("alpha", d.alpha);
    s.read("hit_rate", d.hit_rate);
    s.read("score_lo", d.score_lo);
    s.read("score_hi", d.score_hi);
    s.read("jitter_sigma_m", d.jitter_sigma_m);
    s.read("footprint_radius_m", d.footprint_radius_m);
    s.finish();
    return d;
}

ClutterSpec read_clutter(const nlohmann::json& j, const std::string& prefix,
                         std::vector<std::string>& bad) {
    ClutterSpec c;
    Section s(j, prefix, bad);
    s.read("class", c.cls);
    s.read("uniform_rate_per_km2", c.uniform_rate_per_km2);
    s.read("uniform_score_lo", c.uniform_score_lo);
    s.read("uniform_score_hi", c.uniform_score_hi);
    s.read("hotspot_count", c.hotspot_count);
    s.read("hotspot_mean_detections", c.hotspot_mean_detections);
    s.read("hotspot_radius_m", c.hotspot_radius_m);
    s.read("hotspot_score_lo", c.hotspot_score_lo);
    s.read("hotspot_score_hi", c.hotspot_score_hi);
    s.read("hotspot_min_site_distance_m", c.hotspot_min_site_distance_m);
    s.finish();
    return c;
}

void check(bool ok, const std::string& key, std::vector<std::string>& bad) {
    if (!ok) bad.push_back(key);
}

void check_stage(const StageConfig& stage, const std::string& prefix,
                 std::vector<std::string>& bad) {
    check(stage.alpha >= 0.0 && stage.alpha <= 1.0, prefix + "alpha", bad);
    check(stage.radius_m > 0.0, prefix + "radius_m", bad);
    check(stage.stride_m > 0.0, prefix + "stride_m", bad);
}

/// Domain checks over the merged config; collects offending keys.
void validate(const PipelineConfig& cfg, std::vector<std::string>& bad) {
    check(cfg.distance.sphere_radius_m > 0.0, "distance.sphere_radius_m", bad);
    check_stage(cfg.site, "site.", bad);
    check_stage(cfg.component, "component.", bad);
    check(!cfg.component_classes.empty(), "component.classes", bad);
    for (const auto& cls : cfg.component_classes) {
        if (cls.empty()) {
            bad.push_back("component.classes");
            break;
        }
    }
    check(cfg.feature_radius_m > 0.0, "features.radius_m", bad);
    check(cfg.tile_box_m > 0.0, "features.tile_box_m", bad);
    check(cfg.candidate_min_score >= 0.0, "candidates.min_cluster_score", bad);
    check(cfg.match_radius_m > 0.0, "candidates.match_radius_m", bad);
    check(cfg.mlp.epochs >= 1, "fusion.mlp.epochs", bad);
    check(cfg.mlp.learning_rate > 0.0, "fusion.mlp.learning_rate", bad);
    check(cfg.mlp.hidden_activation == "tanh" || cfg.mlp.hidden_activation == "sigmoid" ||
              cfg.mlp.hidden_activation == "relu",
          "fusion.mlp.hidden_activation", bad);
    check(cfg.anfis.epochs >= 1, "fusion.anfis.epochs", bad);
    check(cfg.anfis.learning_rate > 0.0, "fusion.anfis.learning_rate", bad);
    check(!cfg.weights.empty(), "rank.weights", bad);
    check(cfg.rank_radius_m > 0.0, "rank.radius_m", bad);

    const Scenario& sc = cfg.scenario;
    check(sc.aoi.width_km > 0.0, "synth.aoi.width_km", bad);
    check(sc.aoi.height_km > 0.0, "synth.aoi.height_km", bad);
    check(sc.site_count >= 1, "synth.site_count", bad);
    check(sc.site_margin_km >= 0.0, "synth.site_margin_km", bad);
    check(sc.pads.ring_radius_m > 0.0, "synth.pads.ring_radius_m", bad);
    check(sc.pads.min_pads >= 1 && sc.pads.max_pads >= sc.pads.min_pads, "synth.pads.min_pads",
          bad);
    bool weights_ok = sc.pads.occupancy_weights.size() == 4;
    double weight_sum = 0.0;
    for (double w : sc.pads.occupancy_weights) {
        if (w < 0.0) weights_ok = false;
        weight_sum += w;
    }
    check(weights_ok && weight_sum > 0.0, "synth.pads.occupancy_weights", bad);
    for (std::size_t i = 0; i < sc.detectors.size(); ++i) {
        const auto& d = sc.detectors[i];
        const std::string p = "synth.detectors[" + std::to_string(i) + "].";
        check(!d.cls.empty(), p + "class", bad);
        check(d.stride_m > 0.0, p + "stride_m", bad);
        check(d.alpha >= 0.0 && d.alpha <= 1.0, p + "alpha", bad);
        check(d.hit_rate >= 0.0 && d.hit_rate <= 1.0, p + "hit_rate", bad);
        check(0.0 <= d.score_lo && d.score_lo <= d.score_hi && d.score_hi <= 1.0, p + "score_lo",
              bad);
        check(d.jitter_sigma_m >= 0.0, p + "jitter_sigma_m", bad);
        check(d.footprint_radius_m > 0.0, p + "footprint_radius_m", bad);
    }
    for (std::size_t i = 0; i < sc.clutter.size(); ++i) {
        const auto& c = sc.clutter[i];
        const std::string p = "synth.clutter[" + std::to_string(i) + "].";
        check(!c.cls.empty(), p + "class", bad);
        check(c.uniform_rate_per_km2 >= 0.0, p + "uniform_rate_per_km2", bad);
        check(0.0 <= c.uniform_score_lo && c.uniform_score_lo <= c.uniform_score_hi &&
                  c.uniform_score_hi <= 1.0,
              p + "uniform_score_lo", bad);
        check(c.hotspot_count >= 0, p + "hotspot_count", bad);
        check(c.hotspot_mean_detections >= 0.0, p + "hotspot_mean_detections", bad);
        check(c.hotspot_radius_m > 0.0, p + "hotspot_radius_m", bad);
        check(0.0 <= c.hotspot_score_lo && c.hotspot_score_lo <= c.hotspot_score_hi &&
                  c.hotspot_score_hi <= 1.0,
              p + "hotspot_score_lo", bad);
        check(c.hotspot_min_site_distance_m >= 0.0, p + "hotspot_min_site_distance_m", bad);
    }
    check(sc.pseudo_negative_offset_m > 0.0, "synth.pseudo_negative_offset_m", bad);
}

}  // namespace

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.scenario = default_scenario();
    apply_seed(cfg);
    return cfg;
}

void apply_seed(PipelineConfig& cfg) {
    cfg.scenario.seed = cfg.seed;
    cfg.mlp.seed = cfg.seed;
    cfg.anfis.seed = cfg.seed;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig cfg = default_config();
    std::vector<std::string> bad;

    Section root(j, "", bad);
    root.read("seed", cfg.seed);
    if (const auto* d = root.object("distance")) {
        Section s(*d, "distance.", bad);
        s.read_enum("kind", cfg.distance.kind, distance_kind_from_string);
        s.read("sphere_radius_m", cfg.distance.sphere_radius_m);
        s.finish();
    }
    if (const auto* site = root.object("site")) read_stage(*site, "site.", cfg.site, bad);
    if (const auto* comp = root.object("component")) {
        Section s(*comp, "component.", bad);
        s.read("alpha", cfg.component.alpha);
        s.read("radius_m", cfg.component.radius_m);
        s.read("stride_m", cfg.component.stride_m);
        s.read_enum("penalty", cfg.component.penalty, penalty_mode_from_string);
        s.read("classes", cfg.component_classes);
        s.finish();
    }
    if (const auto* f = root.object("features")) {
        Section s(*f, "features.", bad);
        s.read("radius_m", cfg.feature_radius_m);
        s.read("tile_box_m", cfg.tile_box_m);
        s.finish();
    }
    if (const auto* c = root.object("candidates")) {
        Section s(*c, "candidates.", bad);
        s.read("min_cluster_score", cfg.candidate_min_score);
        s.read("match_radius_m", cfg.match_radius_m);
        s.finish();
    }
    if (const auto* f = root.object("fusion")) {
        Section s(*f, "fusion.", bad);
        s.read_enum("model", cfg.fusion_model, fusion_model_from_string);
        s.read_enum("combo", cfg.combo, combo_from_string);
        s.read_enum("feature_type", cfg.feature_type, feature_type_from_string);
        if (const auto* m = s.object("mlp")) {
            Section ms(*m, "fusion.mlp.", bad);
            ms.read("hidden", cfg.mlp.hidden);
            ms.read("hidden_activation", cfg.mlp.hidden_activation);
            ms.read("epochs", cfg.mlp.epochs);
            ms.read("learning_rate", cfg.mlp.learning_rate);
            ms.finish();
        }
        if (const auto* a = s.object("anfis")) {
            Section as(*a, "fusion.anfis.", bad);
            as.read("epochs", cfg.anfis.epochs);
            as.read("learning_rate", cfg.anfis.learning_rate);
            as.read("fit_output_threshold", cfg.anfis.fit_output_threshold);
            as.finish();
        }
        s.finish();
    }
    if (const auto* r = root.object("rank")) {
        Section s(*r, "rank.", bad);
        s.read("weights", cfg.weights);
        s.read("radius_m", cfg.rank_radius_m);
        s.finish();
    }
    if (const auto* sy = root.object("synth")) {
        Section s(*sy, "synth.", bad);
        if (const auto* aoi = s.object("aoi")) {
            Section as(*aoi, "synth.aoi.", bad);
            as.read("width_km", cfg.scenario.aoi.width_km);
            as.read("height_km", cfg.scenario.aoi.height_km);
            as.finish();
        }
        s.read("site_count", cfg.scenario.site_count);
        s.read("site_margin_km", cfg.scenario.site_margin_km);
        if (const auto* pads = s.object("pads")) {
            Section ps(*pads, "synth.pads.", bad);
            ps.read("ring_radius_m", cfg.scenario.pads.ring_radius_m);
            ps.read("min_pads", cfg.scenario.pads.min_pads);
            ps.read("max_pads", cfg.scenario.pads.max_pads);
            ps.read("occupancy_weights", cfg.scenario.pads.occupancy_weights);
            ps.finish();
        }
        if (const auto* dets = s.array("detectors")) {
            cfg.scenario.detectors.clear();
            for (std::size_t i = 0; i < dets->size(); ++i) {
                cfg.scenario.detectors.push_back(read_detector(
                    (*dets)[i], "synth.detectors[" + std::to_string(i) + "].", bad));
            }
        }
        if (const auto* cl = s.array("clutter")) {
            cfg.scenario.clutter.clear();
            for (std::size_t i = 0; i < cl->size(); ++i) {
                cfg.scenario.clutter.push_back(
                    read_clutter((*cl)[i], "synth.clutter[" + std::to_string(i) + "].", bad));
            }
        }
        s.read("pseudo_negative_offset_m", cfg.scenario.pseudo_negative_offset_m);
        s.finish();
    }
    root.finish();

    apply_seed(cfg);
    validate(cfg, bad);
    if (!bad.empty()) {
        std::string msg = "invalid config keys:";
        for (const auto& k : bad) msg += " " + k;
        throw ValidationError(msg, std::move(bad));
    }
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    return config_from_json(read_json(path));
}

nlohmann::json config_to_json(const PipelineConfig& cfg) {
    const auto stage = [](const StageConfig& s) {
        return nlohmann::json{{"alpha", s.alpha},
                              {"radius_m", s.radius_m},
                              {"stride_m", s.stride_m},
                              {"penalty", to_string(s.penalty)}};
    };
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["distance"] = {{"kind", to_string(cfg.distance.kind)},
                     {"sphere_radius_m", cfg.distance.sphere_radius_m}};
    j["site"] = stage(cfg.site);
    j["component"] = stage(cfg.component);
    j["component"]["classes"] = cfg.component_classes;
    j["features"] = {{"radius_m", cfg.feature_radius_m}, {"tile_box_m", cfg.tile_box_m}};
    j["candidates"] = {{"min_cluster_score", cfg.candidate_min_score},
                       {"match_radius_m", cfg.match_radius_m}};
    j["fusion"] = {
        {"model", to_string(cfg.fusion_model)},
        {"combo", to_string(cfg.combo)},
        {"feature_type", to_string(cfg.feature_type)},
        {"mlp",
         {{"hidden", cfg.mlp.hidden},
          {"hidden_activation", cfg.mlp.hidden_activation},
          {"epochs", cfg.mlp.epochs},
          {"learning_rate", cfg.mlp.learning_rate}}},
        {"anfis",
         {{"epochs", cfg.anfis.epochs},
          {"learning_rate", cfg.anfis.learning_rate},
          {"fit_output_threshold", cfg.anfis.fit_output_threshold}}}};
    j["rank"] = {{"weights", cfg.weights}, {"radius_m", cfg.rank_radius_m}};

    nlohmann::json detectors = nlohmann::json::array();
    for (const auto& d : cfg.scenario.detectors) {
        detectors.push_back({{"class", d.cls},
                             {"stride_m", d.stride_m},
                             {"alpha", d.alpha},
                             {"hit_rate", d.hit_rate},
                             {"score_lo", d.score_lo},
                             {"score_hi", d.score_hi},
                             {"jitter_sigma_m", d.jitter_sigma_m},
                             {"footprint_radius_m", d.footprint_radius_m}});
    }
    nlohmann::json clutter = nlohmann::json::array();
    for (const auto& c : cfg.scenario.clutter) {
        clutter.push_back({{"class", c.cls},
                           {"uniform_rate_per_km2", c.uniform_rate_per_km2},
                           {"uniform_score_lo", c.uniform_score_lo},
                           {"uniform_score_hi", c.uniform_score_hi},
                           {"hotspot_count", c.hotspot_count},
                           {"hotspot_mean_detections", c.hotspot_mean_detections},
                           {"hotspot_radius_m", c.hotspot_radius_m},
                           {"hotspot_score_lo", c.hotspot_score_lo},
                           {"hotspot_score_hi", c.hotspot_score_hi},
                           {"hotspot_min_site_distance_m", c.hotspot_min_site_distance_m}});
    }
    j["synth"] = {{"aoi",
                   {{"width_km", cfg.scenario.aoi.width_km},
                    {"height_km", cfg.scenario.aoi.height_km}}},
                  {"site_count", cfg.scenario.site_count},
                  {"site_margin_km", cfg.scenario.site_margin_km},
                  {"pads",
                   {{"ring_radius_m", cfg.scenario.pads.ring_radius_m},
                    {"min_pads", cfg.scenario.pads.min_pads},
                    {"max_pads", cfg.scenario.pads.max_pads},
                    {"occupancy_weights", cfg.scenario.pads.occupancy_weights}}},
                  {"detectors", std::move(detectors)},
                  {"clutter", std::move(clutter)},
                  {"pseudo_negative_offset_m", cfg.scenario.pseudo_negative_offset_m}};
    return j;
}

}  // namespace detfuse

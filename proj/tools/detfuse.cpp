// detfuse: command-line driver for the detection-fusion pipeline.
//
// Subcommands compose the library into the two standard workflows —
// error reduction (synth -> cluster -> features -> dta -> fuse -> eval) and
// candidate re-ranking (rank) — reading and writing only the documented
// CSV/JSON artifact formats. Every command is deterministic given the
// config: re-running on unchanged inputs produces byte-identical outputs.
//
// Errors leave a single-line machine-readable JSON record on stderr and a
// nonzero exit code. Parse errors name the offending file and line; config
// schema violations list the offending keys.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "detfuse/cluster.hpp"
#include "detfuse/config.hpp"
#include "detfuse/dta.hpp"
#include "detfuse/errors.hpp"
#include "detfuse/eval.hpp"
#include "detfuse/features.hpp"
#include "detfuse/field.hpp"
#include "detfuse/fusion.hpp"
#include "detfuse/io.hpp"
#include "detfuse/pipeline.hpp"
#include "detfuse/rank.hpp"
#include "detfuse/synth.hpp"

namespace fs = std::filesystem;
using namespace detfuse;

namespace {

// ---------------------------------------------------------------------------
// options shared by every subcommand

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> penalty;
    std::optional<std::string> model;
    std::optional<std::string> combo;
    std::optional<std::string> feature_type;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (defaults used when absent)");
    cmd->add_option("--seed", o.seed, "override the config seed (drives every random draw)");
    cmd->add_option("--penalty", o.penalty, "over-detection penalty for both scan stages")
        ->check(CLI::IsMember({"truncate", "flat", "exp"}));
    cmd->add_option("--model", o.model, "fusion model")
        ->check(CLI::IsMember({"or", "mlp", "anfis"}));
    cmd->add_option("--combo", o.combo, "component classes fused together")
        ->check(CLI::IsMember({"empty+3", "combo+3", "all5"}));
    cmd->add_option("--feature-type", o.feature_type, "per-class feature fed into fusion")
        ->check(CLI::IsMember({"raw-max", "raw-count", "cluster-count", "cluster-score-sum"}));
}

/// Config file (or defaults) with the shared flags folded in on top.
PipelineConfig effective_config(const CommonOpts& o) {
    PipelineConfig cfg =
        o.config_path.empty() ? default_config() : load_config_file(o.config_path);
    if (o.seed) {
        cfg.seed = *o.seed;
        apply_seed(cfg);
    }
    if (o.penalty) {
        const PenaltyMode mode = penalty_mode_from_string(*o.penalty);
        cfg.site.penalty = mode;
        cfg.component.penalty = mode;
    }
    if (o.model) cfg.fusion_model = fusion_model_from_string(*o.model);
    if (o.combo) cfg.combo = combo_from_string(*o.combo);
    if (o.feature_type) cfg.feature_type = feature_type_from_string(*o.feature_type);
    return cfg;
}

std::string join(const fs::path& dir, const char* name) { return (dir / name).string(); }

/// Scan stride per class, used to rehydrate detection fields from CSV.
std::map<std::string, double> stride_map(const PipelineConfig& cfg) {
    std::map<std::string, double> strides{{"site", cfg.site.stride_m}};
    for (const auto& cls : cfg.component_classes) strides[cls] = cfg.component.stride_m;
    return strides;
}

void write_command_report(const fs::path& dir, const std::string& command,
                          const PipelineConfig& cfg, nlohmann::json summary) {
    nlohmann::json report;
    report["command"] = command;
    report["config"] = config_to_json(cfg);
    report["summary"] = std::move(summary);
    write_report_json(join(dir, (command + "_report.json").c_str()), std::move(report));
}

nlohmann::json metrics_json(const Metrics& m) {
    nlohmann::json j{{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn},
                     {"tpr", m.tpr}, {"ppv", m.ppv}, {"f1", m.f1}};
    if (m.tn >= 0) j["tn"] = m.tn;
    return j;
}

// ---------------------------------------------------------------------------
// subcommand bodies

/// synth: generate the scenario into detections + truth + training candidates.
void cmd_synth(const PipelineConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const GeneratedScenario gen = generate(cfg.scenario);
    write_detections_csv(join(out, "detections.csv"), gen.fields);
    write_truth_json(join(out, "truth.json"), gen);
    const auto train = make_training_set(gen, cfg.scenario.pseudo_negative_offset_m);
    write_candidates_csv(join(out, "candidates_train.csv"), train);

    nlohmann::json counts;
    for (const auto& [cls, field] : gen.fields) counts[cls] = field.detections.size();
    write_command_report(out, "synth", cfg,
                         {{"sites", gen.sites.size()},
                          {"training_candidates", train.size()},
                          {"detections_by_class", counts}});
}

/// cluster: amplify + cluster the requested classes; site clusters become
/// labeled candidates when the truth table is available.
void cmd_cluster(const PipelineConfig& cfg, const fs::path& in, const fs::path& out,
                 const std::string& only_class) {
    fs::create_directories(out);
    const auto fields = read_detections_csv(join(in, "detections.csv"), cfg.distance,
                                            stride_map(cfg));

    std::vector<std::string> classes;
    if (!only_class.empty()) {
        if (!fields.count(only_class)) {
            throw std::invalid_argument("class '" + only_class +
                                        "' not present in the detections");
        }
        classes.push_back(only_class);
    } else {
        if (fields.count("site")) classes.push_back("site");
        for (const auto& cls : cfg.component_classes) {
            if (fields.count(cls)) classes.push_back(cls);
        }
    }

    nlohmann::json counts;
    nlohmann::json summary;
    for (const auto& cls : classes) {
        const StageConfig& stage = cls == "site" ? cfg.site : cfg.component;
        const auto clusters = cluster_class(fields.at(cls), stage);
        write_clusters_csv(join(out, ("clusters_" + cls + ".csv").c_str()), clusters);
        counts[cls] = clusters.size();

        if (cls == "site") {
            auto candidates = candidates_from_clusters(clusters, cfg.candidate_min_score);
            const auto truth_path = in / "truth.json";
            if (fs::exists(truth_path)) {
                const TruthTable truth = read_truth_json(truth_path.string());
                label_candidates(candidates, truth.sites, cfg.match_radius_m, cfg.distance);
            }
            write_candidates_csv(join(out, "candidates.csv"), candidates);
            summary["candidates"] = candidates.size();
        }
    }
    summary["clusters_by_class"] = counts;
    write_command_report(out, "cluster", cfg, summary);
}

/// features: component evidence for the scan candidates (and the training
/// candidates when present).
void cmd_features(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
    fs::create_directories(out);
    const auto fields = read_detections_csv(join(in, "detections.csv"), cfg.distance,
                                            stride_map(cfg));

    nlohmann::json summary;
    const auto extract = [&](const char* candidates_name, const char* features_name,
                             const char* key) {
        const fs::path path = in / candidates_name;
        if (!fs::exists(path)) return false;
        const auto candidates = read_candidates_csv(path.string());
        const auto evidence = build_evidence(fields, candidates, cfg);
        std::vector<CandidateFeatures> features;
        features.reserve(evidence.size());
        for (const auto& ev : evidence) features.push_back(ev.features);
        write_features_csv(join(out, features_name), features);
        summary[key] = features.size();
        return true;
    };

    if (!extract("candidates.csv", "features.csv", "candidates")) {
        throw std::invalid_argument("no candidates.csv under " + in.string() +
                                    " (run cluster first)");
    }
    extract("candidates_train.csv", "features_train.csv", "training_candidates");
    write_command_report(out, "features", cfg, summary);
}

/// dta: per-class F1-optimal thresholds over the labeled training features.
void cmd_dta(const PipelineConfig& cfg, const fs::path& in, const fs::path& out,
             const std::string& only_class) {
    fs::create_directories(out);
    const fs::path source =
        fs::exists(in / "features_train.csv") ? in / "features_train.csv" : in / "features.csv";
    const auto features = read_features_csv(source.string());

    const std::vector<std::string> classes =
        only_class.empty() ? combo_classes(cfg.combo) : std::vector<std::string>{only_class};
    const auto thresholds = fit_class_thresholds(features, classes, cfg.feature_type);
    write_thresholds_json(join(out, "thresholds.json"), thresholds);

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : thresholds) {
        rows.push_back({{"class", t.cls},
                        {"feature_type", t.feature_type},
                        {"threshold", t.threshold},
                        {"f1", t.f1},
                        {"tpr", t.tpr},
                        {"ppv", t.ppv}});
    }
    write_command_report(out, "dta", cfg,
                         {{"source", source.filename().string()}, {"thresholds", rows}});
}

/// fuse: train the fusion model on the training features, then decide every
/// scan candidate.
void cmd_fuse(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
    fs::create_directories(out);
    const auto train_features = read_features_csv(join(in, "features_train.csv"));
    const auto train = make_feature_vectors(train_features, cfg.combo, cfg.feature_type);
    const FusionModel model = train_fusion(train, cfg.fusion_model, cfg.combo,
                                           cfg.feature_type, cfg.mlp, cfg.anfis);
    write_thresholds_json(join(out, "thresholds.json"), model.thresholds);
    write_model_json(join(out, "model.json"), model);

    const auto scan_features = read_features_csv(join(in, "features.csv"));
    const auto scan = make_feature_vectors(scan_features, cfg.combo, cfg.feature_type);
    const auto records = fuse_candidates(scan, model);
    write_decisions_csv(join(out, "decisions.csv"), records);

    std::size_t kept = 0;
    for (const auto& r : records) kept += r.decision ? 1 : 0;
    write_command_report(out, "fuse", cfg,
                         {{"model", to_string(model.kind)},
                          {"combo", to_string(model.combo)},
                          {"feature_type", to_string(model.feature_type)},
                          {"candidates", records.size()},
                          {"kept", kept}});
}

WeightProfile load_weights(const std::string& spec, const PipelineConfig& cfg) {
    if (spec == "expert") return expert_weights();
    if (spec == "uniform") return uniform_weights(combo_classes(cfg.combo));
    const nlohmann::json j = read_json(spec);
    std::vector<std::string> bad;
    if (!j.is_object() || !j.contains("site") || !j["site"].is_number()) {
        bad.push_back("site");
    }
    if (!j.contains("classes") || !j["classes"].is_object()) {
        bad.push_back("classes");
    } else {
        for (const auto& [cls, w] : j["classes"].items()) {
            if (!w.is_number()) bad.push_back("classes." + cls);
        }
    }
    if (!bad.empty()) {
        throw ValidationError("weights file " + spec + ": bad or missing keys", bad);
    }
    WeightProfile w;
    w.site = j["site"].get<double>();
    for (const auto& [cls, v] : j["classes"].items()) w.by_class[cls] = v.get<double>();
    validate(w);
    return w;
}

/// rank: score-level fusion of site score and component cluster evidence,
/// then re-rank the candidate list.
void cmd_rank(const PipelineConfig& cfg, const fs::path& in, const fs::path& out,
              const std::string& weights_flag) {
    fs::create_directories(out);
    const auto fields = read_detections_csv(join(in, "detections.csv"), cfg.distance,
                                            stride_map(cfg));
    const auto candidates = read_candidates_csv(join(in, "candidates.csv"));
    const auto evidence = build_evidence(fields, candidates, cfg);

    const std::string spec = weights_flag.empty() ? cfg.weights : weights_flag;
    const WeightProfile weights = load_weights(spec, cfg);
    const auto scores = rank_scores(candidates, evidence, weights, cfg.rank_radius_m,
                                    cfg.distance);
    const auto ranked = rerank(candidates, scores);
    write_ranked_csv(join(out, "ranked.csv"), ranked);

    nlohmann::json summary{{"weights", spec}, {"candidates", ranked.size()}};
    bool any_tp = false;
    for (const auto& r : ranked) any_tp = any_tp || (r.is_tp && *r.is_tp);
    if (any_tp) {
        summary["avg_tp_rank"] = avg_tp_rank(ranked);
        std::vector<double> site_scores;
        site_scores.reserve(candidates.size());
        for (const auto& c : candidates) site_scores.push_back(c.site_score);
        summary["avg_tp_rank_site_score"] = avg_tp_rank(rerank(candidates, site_scores));
    }
    write_command_report(out, "rank", cfg, summary);
}

/// eval: site-level confusion of the fused decisions against the truth,
/// with the unfused candidate list as the baseline. Missing or empty
/// decisions evaluate as "reject everything".
void cmd_eval(const PipelineConfig& cfg, const fs::path& in, const fs::path& out) {
    fs::create_directories(out);
    const auto candidates = read_candidates_csv(join(in, "candidates.csv"));
    const TruthTable truth = read_truth_json(join(in, "truth.json"));

    std::map<std::int64_t, bool> decision_by_id;
    if (fs::exists(in / "decisions.csv")) {
        for (const auto& r : read_decisions_csv(join(in, "decisions.csv"))) {
            decision_by_id[r.candidate_id] = r.decision;
        }
    }

    const auto n_sites = static_cast<std::int64_t>(truth.sites.size());
    std::int64_t base_tp = 0, base_fp = 0, fused_tp = 0, fused_fp = 0;
    for (const auto& c : candidates) {
        if (!c.label) {
            throw std::invalid_argument(
                "candidates are unlabeled; rerun cluster with truth.json present");
        }
        (*c.label ? base_tp : base_fp) += 1;
        const auto it = decision_by_id.find(c.id);
        if (it != decision_by_id.end() && it->second) {
            (*c.label ? fused_tp : fused_fp) += 1;
        }
    }
    const Metrics baseline = confusion_from_counts(base_tp, base_fp, n_sites - base_tp);
    const Metrics fused = confusion_from_counts(fused_tp, fused_fp, n_sites - fused_tp);

    nlohmann::json report;
    report["command"] = "eval";
    report["config"] = config_to_json(cfg);
    report["baseline"] = metrics_json(baseline);
    report["fusion"] = metrics_json(fused);
    if (baseline.fp + baseline.fn > 0) {
        report["fusion"]["relative_error_reduction"] = relative_error_reduction(fused, baseline);
    }
    const double area = cfg.scenario.aoi.width_km * cfg.scenario.aoi.height_km;
    if (area > 0.0) {
        report["baseline"]["error_density_per_km2"] = error_density(baseline, area);
        report["fusion"]["error_density_per_km2"] = error_density(fused, area);
    }

    if (fs::exists(in / "ranked.csv")) {
        const auto ranked = read_ranked_csv(join(in, "ranked.csv"));
        bool any_tp = false;
        for (const auto& r : ranked) any_tp = any_tp || (r.is_tp && *r.is_tp);
        if (any_tp) {
            std::vector<double> site_scores;
            site_scores.reserve(candidates.size());
            for (const auto& c : candidates) site_scores.push_back(c.site_score);
            report["rank"] = {
                {"avg_tp_rank", avg_tp_rank(ranked)},
                {"avg_tp_rank_site_score", avg_tp_rank(rerank(candidates, site_scores))}};
        }
    }
    write_report_json(join(out, "report.json"), std::move(report));
}

/// sweep-plot: operating-point curve of one class's feature values, as CSV
/// plus a static SVG.
void cmd_sweep_plot(const PipelineConfig& cfg, const fs::path& in, const fs::path& out,
                    const std::string& only_class) {
    fs::create_directories(out);
    const fs::path source =
        fs::exists(in / "features_train.csv") ? in / "features_train.csv" : in / "features.csv";
    const auto features = read_features_csv(source.string());

    const std::string cls = only_class.empty() ? combo_classes(cfg.combo)[0] : only_class;
    std::vector<double> values;
    std::vector<bool> labels;
    values.reserve(features.size());
    for (const auto& f : features) {
        if (!f.label) {
            throw std::invalid_argument("feature rows are unlabeled; sweep needs labels");
        }
        values.push_back(feature_value(class_features(f, cls), cfg.feature_type));
        labels.push_back(*f.label);
    }
    const auto curve = sweep_curve(values, labels);
    write_sweep_csv(join(out, "sweep.csv"), curve);
    write_sweep_svg(join(out, "sweep.svg"), curve,
                    cls + " " + to_string(cfg.feature_type) + " threshold sweep");
    write_command_report(out, "sweep_plot", cfg,
                         {{"source", source.filename().string()},
                          {"class", cls},
                          {"feature_type", to_string(cfg.feature_type)},
                          {"points", curve.size()}});
}

// ---------------------------------------------------------------------------
// error records

int fail(const std::string& type, const std::string& message,
         const std::optional<nlohmann::json>& extra = std::nullopt) {
    nlohmann::json err{{"type", type}, {"message", message}};
    if (extra) {
        for (const auto& [k, v] : extra->items()) err[k] = v;
    }
    std::cerr << nlohmann::json{{"error", err}}.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geospatial detection-fusion pipeline"};
    app.require_subcommand(1);

    struct {
        CommonOpts common;
        std::string input;
        std::string output;
        std::string cls;
        std::string weights;
    } opt;

    const auto add_io = [&](CLI::App* cmd, bool needs_input) {
        add_common(cmd, opt.common);
        if (needs_input) {
            cmd->add_option("--input", opt.input, "run directory holding the input artifacts")
                ->required();
            cmd->add_option("--output", opt.output,
                            "output directory (defaults to the input directory)");
        } else {
            cmd->add_option("--output", opt.output, "output directory")->required();
        }
        return cmd;
    };

    auto* synth = add_io(app.add_subcommand("synth", "generate a synthetic scenario"), false);
    auto* cluster =
        add_io(app.add_subcommand("cluster", "amplify and cluster detection fields"), true);
    cluster->add_option("--class", opt.cls, "cluster only this class");
    auto* features = add_io(
        app.add_subcommand("features", "extract per-candidate component evidence"), true);
    auto* dta = add_io(
        app.add_subcommand("dta", "fit per-class F1-optimal decision thresholds"), true);
    dta->add_option("--class", opt.cls, "fit only this class");
    auto* fuse =
        add_io(app.add_subcommand("fuse", "train the fusion model and decide candidates"), true);
    auto* rank =
        add_io(app.add_subcommand("rank", "re-rank candidates by fused evidence"), true);
    rank->add_option("--weights", opt.weights, "uniform | expert | path to a weights JSON");
    auto* eval =
        add_io(app.add_subcommand("eval", "score decisions against the truth table"), true);
    auto* sweep = add_io(
        app.add_subcommand("sweep-plot", "threshold sweep curve as CSV and SVG"), true);
    sweep->add_option("--class", opt.cls, "sweep this class (default: first fused class)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << nlohmann::json{
                         {"error", {{"type", "usage"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return e.get_exit_code();
    }

    try {
        const PipelineConfig cfg = effective_config(opt.common);
        const fs::path in = opt.input;
        const fs::path out = opt.output.empty() ? in : fs::path(opt.output);

        if (synth->parsed()) cmd_synth(cfg, opt.output);
        if (cluster->parsed()) cmd_cluster(cfg, in, out, opt.cls);
        if (features->parsed()) cmd_features(cfg, in, out);
        if (dta->parsed()) cmd_dta(cfg, in, out, opt.cls);
        if (fuse->parsed()) cmd_fuse(cfg, in, out);
        if (rank->parsed()) cmd_rank(cfg, in, out, opt.weights);
        if (eval->parsed()) cmd_eval(cfg, in, out);
        if (sweep->parsed()) cmd_sweep_plot(cfg, in, out, opt.cls);
        return 0;
    } catch (const ParseError& e) {
        return fail("parse", e.what(),
                    nlohmann::json{{"file", e.file()}, {"line", e.line()}});
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), nlohmann::json{{"keys", e.keys()}});
    } catch (const std::invalid_argument& e) {
        return fail("validation", e.what());
    } catch (const std::exception& e) {
        return fail("error", e.what());
    }
}

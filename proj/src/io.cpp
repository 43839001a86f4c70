#include "detfuse/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace detfuse {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

/// Line-oriented CSV reader that validates the header and column counts and
/// reports failures as file:line parse errors.
class CsvReader {
public:
    CsvReader(const std::string& path, const std::string& header) : path_(path), in_(path) {
        if (!in_) throw std::runtime_error("cannot open for reading: " + path);
        std::string line;
        if (!read_line(line)) throw ParseError(path_, 1, "empty file, expected header " + header);
        if (line != header) {
            throw ParseError(path_, 1, "bad header, expected: " + header);
        }
        columns_ = split_csv(header).size();
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (read_line(line)) {
            if (line.empty()) continue;  // tolerate a trailing newline
            fields = split_csv(line);
            if (fields.size() != columns_) {
                throw ParseError(path_, line_, "expected " + std::to_string(columns_) +
                                                   " columns, got " +
                                                   std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    double as_double(const std::string& field, const char* what) {
        double v = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            throw ParseError(path_, line_, std::string("bad ") + what + ": '" + field + "'");
        }
        return v;
    }

    std::int64_t as_int(const std::string& field, const char* what) {
        std::int64_t v = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            throw ParseError(path_, line_, std::string("bad ") + what + ": '" + field + "'");
        }
        return v;
    }

    bool as_bool(const std::string& field, const char* what) {
        if (field == "0") return false;
        if (field == "1") return true;
        throw ParseError(path_, line_, std::string("bad ") + what + ": '" + field + "'");
    }

    ParseError error(const std::string& what) const { return ParseError(path_, line_, what); }

private:
    bool read_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_;
        return true;
    }

    std::string path_;
    std::ifstream in_;
    std::size_t line_ = 0;
    std::size_t columns_ = 0;
};

std::string opt_bool_field(const std::optional<bool>& v) {
    if (!v.has_value()) return "";
    return *v ? "1" : "0";
}

std::optional<bool> parse_opt_bool(CsvReader& r, const std::string& field, const char* what) {
    if (field.empty()) return std::nullopt;
    return r.as_bool(field, what);
}

}  // namespace

// --- detection fields --------------------------------------------------------

void write_detections_csv(const std::string& path,
                          const std::map<std::string, DetectionField>& fields) {
    auto out = open_out(path);
    out << "id,class,x,y,score,tile\n";
    for (const auto& [cls, field] : fields) {
        for (const auto& d : field.detections) {
            out << d.id << ',' << cls << ',' << format_double(d.location.x) << ','
                << format_double(d.location.y) << ',' << format_double(d.score) << ',' << d.tile
                << '\n';
        }
    }
}

std::map<std::string, DetectionField> read_detections_csv(
    const std::string& path, const DistanceModel& model,
    const std::map<std::string, double>& stride_by_class) {
    CsvReader reader(path, "id,class,x,y,score,tile");
    std::map<std::string, DetectionField> fields;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::string& cls = f[1];
        auto it = fields.find(cls);
        if (it == fields.end()) {
            const auto stride = stride_by_class.find(cls);
            if (stride == stride_by_class.end()) {
                throw reader.error("no stride configured for class '" + cls + "'");
            }
            DetectionField field;
            field.cls = cls;
            field.model = model;
            field.stride_m = stride->second;
            it = fields.emplace(cls, std::move(field)).first;
        }
        RawDetection d;
        d.id = reader.as_int(f[0], "id");
        d.location.x = reader.as_double(f[2], "x");
        d.location.y = reader.as_double(f[3], "y");
        d.score = reader.as_double(f[4], "score");
        d.tile = reader.as_int(f[5], "tile");
        if (d.score < 0.0 || d.score > 1.0) throw reader.error("score outside [0,1]");
        it->second.detections.push_back(d);
    }
    return fields;
}

// --- clusters ------------------------------------------------------------------

void write_clusters_csv(const std::string& path, const std::vector<Cluster>& clusters) {
    auto out = open_out(path);
    out << "rank,class,score,x,y,seed_id,member_count\n";
    for (const auto& c : clusters) {
        out << c.rank << ',' << c.cls << ',' << format_double(c.score) << ','
            << format_double(c.location.x) << ',' << format_double(c.location.y) << ','
            << c.seed_id << ',' << c.members.size() << '\n';
    }
}

// --- candidates ------------------------------------------------------------------

namespace {

std::string source_name(CandidateSource s) {
    return s == CandidateSource::Scan ? "scan" : "pseudo-train";
}

}  // namespace

void write_candidates_csv(const std::string& path, const std::vector<Candidate>& candidates) {
    auto out = open_out(path);
    out << "id,x,y,site_score,label,source\n";
    for (const auto& c : candidates) {
        out << c.id << ',' << format_double(c.location.x) << ',' << format_double(c.location.y)
            << ',' << format_double(c.site_score) << ',' << opt_bool_field(c.label) << ','
            << source_name(c.source) << '\n';
    }
}

std::vector<Candidate> read_candidates_csv(const std::string& path) {
    CsvReader reader(path, "id,x,y,site_score,label,source");
    std::vector<Candidate> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        Candidate c;
        c.id = reader.as_int(f[0], "id");
        c.location.x = reader.as_double(f[1], "x");
        c.location.y = reader.as_double(f[2], "y");
        c.site_score = reader.as_double(f[3], "site_score");
        c.label = parse_opt_bool(reader, f[4], "label");
        if (f[5] == "scan") c.source = CandidateSource::Scan;
        else if (f[5] == "pseudo-train") c.source = CandidateSource::PseudoTrain;
        else throw reader.error("bad source: '" + f[5] + "'");
        out.push_back(c);
    }
    return out;
}

// --- candidate features ------------------------------------------------------------

void write_features_csv(const std::string& path, const std::vector<CandidateFeatures>& features) {
    auto out = open_out(path);
    out << "candidate_id,label,class,raw_max,raw_count,cluster_count,cluster_score_sum\n";
    for (const auto& cf : features) {
        for (const auto& [cls, v] : cf.by_class) {
            out << cf.candidate_id << ',' << opt_bool_field(cf.label) << ',' << cls << ','
                << format_double(v.raw_max) << ',' << v.raw_count << ',' << v.cluster_count << ','
                << format_double(v.cluster_score_sum) << '\n';
        }
    }
}

std::vector<CandidateFeatures> read_features_csv(const std::string& path) {
    CsvReader reader(path,
                     "candidate_id,label,class,raw_max,raw_count,cluster_count,cluster_score_sum");
    std::vector<CandidateFeatures> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::int64_t id = reader.as_int(f[0], "candidate_id");
        if (out.empty() || out.back().candidate_id != id) {
            CandidateFeatures cf;
            cf.candidate_id = id;
            cf.label = parse_opt_bool(reader, f[1], "label");
            out.push_back(std::move(cf));
        }
        ClassFeatureValues v;
        v.raw_max = reader.as_double(f[3], "raw_max");
        v.raw_count = reader.as_int(f[4], "raw_count");
        v.cluster_count = reader.as_int(f[5], "cluster_count");
        v.cluster_score_sum = reader.as_double(f[6], "cluster_score_sum");
        if (!out.back().by_class.emplace(f[2], v).second) {
            throw reader.error("duplicate class '" + f[2] + "' for candidate " +
                               std::to_string(id));
        }
    }
    return out;
}

// --- fusion decisions -----------------------------------------------------------------

void write_decisions_csv(const std::string& path, const std::vector<DecisionRecord>& records) {
    auto out = open_out(path);
    out << "candidate_id,decision,score,model,combo,feature_type\n";
    for (const auto& r : records) {
        out << r.candidate_id << ',' << (r.decision ? 1 : 0) << ',' << format_double(r.score)
            << ',' << r.model << ',' << r.combo << ',' << r.feature_type << '\n';
    }
}

std::vector<DecisionRecord> read_decisions_csv(const std::string& path) {
    CsvReader reader(path, "candidate_id,decision,score,model,combo,feature_type");
    std::vector<DecisionRecord> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        DecisionRecord r;
        r.candidate_id = reader.as_int(f[0], "candidate_id");
        r.decision = reader.as_bool(f[1], "decision");
        r.score = reader.as_double(f[2], "score");
        r.model = f[3];
        r.combo = f[4];
        r.feature_type = f[5];
        out.push_back(std::move(r));
    }
    return out;
}

// --- ranked candidates -------------------------------------------------------------------

void write_ranked_csv(const std::string& path, const std::vector<RankedCandidate>& ranked) {
    auto out = open_out(path);
    out << "rank,candidate_id,fused_score,is_tp\n";
    for (const auto& r : ranked) {
        out << r.rank << ',' << r.candidate_id << ',' << format_double(r.fused_score) << ','
            << opt_bool_field(r.is_tp) << '\n';
    }
}

std::vector<RankedCandidate> read_ranked_csv(const std::string& path) {
    CsvReader reader(path, "rank,candidate_id,fused_score,is_tp");
    std::vector<RankedCandidate> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        RankedCandidate r;
        r.rank = static_cast<int>(reader.as_int(f[0], "rank"));
        r.candidate_id = reader.as_int(f[1], "candidate_id");
        r.fused_score = reader.as_double(f[2], "fused_score");
        r.is_tp = parse_opt_bool(reader, f[3], "is_tp");
        out.push_back(r);
    }
    return out;
}

// --- threshold sweeps -------------------------------------------------------------------

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& curve) {
    auto out = open_out(path);
    out << "threshold,tpr,ppv,f1\n";
    for (const auto& p : curve) {
        out << format_double(p.threshold) << ',' << format_double(p.tpr) << ','
            << format_double(p.ppv) << ',' << format_double(p.f1) << '\n';
    }
}

void write_sweep_svg(const std::string& path, const std::vector<SweepPoint>& curve,
                     const std::string& title) {
    if (curve.empty()) throw std::invalid_argument("sweep plot: empty curve");
    const double width = 800.0, height = 500.0;
    const double ml = 70.0, mr = 30.0, mt = 50.0, mb = 60.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    double tmin = curve.front().threshold, tmax = curve.back().threshold;
    if (tmax <= tmin) {  // single point: give the axis a unit span
        tmin -= 0.5;
        tmax += 0.5;
    }
    const auto sx = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * plot_w; };
    const auto sy = [&](double v) { return mt + (1.0 - v) * plot_h; };
    const auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes and grid lines with tick labels.
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(sy(v)) << "\" x2=\""
            << fmt(ml + plot_w) << "\" y2=\"" << fmt(sy(v))
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(sy(v) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(v)
            << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double t = tmin + (tmax - tmin) * i / 4.0;
        out << "<line x1=\"" << fmt(sx(t)) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(sx(t))
            << "\" y2=\"" << fmt(mt + plot_h) << "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << fmt(mt + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(t)
            << "</text>\n";
    }
    out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(plot_w)
        << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << "threshold</text>\n";

    const auto polyline = [&](const char* color, auto getter) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : curve) out << fmt(sx(p.threshold)) << ',' << fmt(sy(getter(p))) << ' ';
        out << "\"/>\n";
    };
    polyline("#1f77b4", [](const SweepPoint& p) { return p.tpr; });
    polyline("#ff7f0e", [](const SweepPoint& p) { return p.ppv; });
    polyline("#2ca02c", [](const SweepPoint& p) { return p.f1; });

    const char* names[3] = {"TPR", "PPV", "F1"};
    const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    for (int i = 0; i < 3; ++i) {
        const double y = mt + 16.0 + 18.0 * i;
        out << "<line x1=\"" << fmt(ml + plot_w - 90) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(ml + plot_w - 60) << "\" y2=\"" << fmt(y) << "\" stroke=\"" << colors[i]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(ml + plot_w - 52) << "\" y=\"" << fmt(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << names[i] << "</text>\n";
    }
    out << "</svg>\n";
}

// --- JSON artifacts -------------------------------------------------------------------

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Recover the line from the byte offset for a file:line diagnostic.
        const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
        const std::size_t line =
            1 + static_cast<std::size_t>(
                    std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte),
                               '\n'));
        throw ParseError(path, line, e.what());
    }
}

namespace {

void write_json_file(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json threshold_to_json(const DtaThreshold& t) {
    return {{"class", t.cls},         {"feature_type", t.feature_type},
            {"threshold", t.threshold}, {"f1", t.f1},
            {"tpr", t.tpr},             {"ppv", t.ppv}};
}

DtaThreshold threshold_from_json(const nlohmann::json& j) {
    DtaThreshold t;
    t.cls = j.at("class").get<std::string>();
    t.feature_type = j.at("feature_type").get<std::string>();
    t.threshold = j.at("threshold").get<double>();
    t.f1 = j.at("f1").get<double>();
    t.tpr = j.at("tpr").get<double>();
    t.ppv = j.at("ppv").get<double>();
    return t;
}

std::string pad_kind_name(PadKind k) {
    switch (k) {
        case PadKind::Empty: return "empty";
        case PadKind::Missile: return "missile";
        case PadKind::Tel: return "tel";
        case PadKind::TelGroup: return "tel_group";
    }
    return "empty";
}

PadKind pad_kind_from(const std::string& name) {
    if (name == "empty") return PadKind::Empty;
    if (name == "missile") return PadKind::Missile;
    if (name == "tel") return PadKind::Tel;
    if (name == "tel_group") return PadKind::TelGroup;
    throw std::invalid_argument("unknown pad occupancy: " + name);
}

}  // namespace

void write_thresholds_json(const std::string& path, const std::vector<DtaThreshold>& thresholds) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["thresholds"] = nlohmann::json::array();
    for (const auto& t : thresholds) j["thresholds"].push_back(threshold_to_json(t));
    write_json_file(path, j);
}

std::vector<DtaThreshold> read_thresholds_json(const std::string& path) {
    const auto j = read_json(path);
    std::vector<DtaThreshold> out;
    for (const auto& t : j.at("thresholds")) out.push_back(threshold_from_json(t));
    return out;
}

void write_truth_json(const std::string& path, const GeneratedScenario& gen) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["aoi"] = {{"width_km", gen.aoi.width_km}, {"height_km", gen.aoi.height_km}};
    j["sites"] = nlohmann::json::array();
    for (const auto& s : gen.sites) {
        nlohmann::json pads = nlohmann::json::array();
        for (int p = 0; p < s.pad_count; ++p) {
            pads.push_back({{"x", s.pad_centers[p].x},
                            {"y", s.pad_centers[p].y},
                            {"occupancy", pad_kind_name(s.pad_occupancy[p])}});
        }
        j["sites"].push_back(
            {{"id", s.id}, {"x", s.center.x}, {"y", s.center.y}, {"pads", std::move(pads)}});
    }
    write_json_file(path, j);
}

TruthTable read_truth_json(const std::string& path) {
    const auto j = read_json(path);
    TruthTable t;
    t.aoi.width_km = j.at("aoi").at("width_km").get<double>();
    t.aoi.height_km = j.at("aoi").at("height_km").get<double>();
    for (const auto& s : j.at("sites")) {
        SiteTruth site;
        site.id = s.at("id").get<std::int64_t>();
        site.center = {s.at("x").get<double>(), s.at("y").get<double>()};
        for (const auto& p : s.at("pads")) {
            site.pad_centers.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
            site.pad_occupancy.push_back(pad_kind_from(p.at("occupancy").get<std::string>()));
        }
        site.pad_count = static_cast<int>(site.pad_centers.size());
        t.sites.push_back(std::move(site));
    }
    return t;
}

void write_model_json(const std::string& path, const FusionModel& model) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = to_string(model.kind);
    j["combo"] = to_string(model.combo);
    j["feature_type"] = to_string(model.feature_type);
    j["classes"] = model.classes;
    j["thresholds"] = nlohmann::json::array();
    for (const auto& t : model.thresholds) j["thresholds"].push_back(threshold_to_json(t));
    j["normalize"] = model.normalize;
    j["mlp_decision_threshold"] = model.mlp_decision_threshold;
    if (model.mlp.has_value()) {
        const auto& m = *model.mlp;
        j["mlp"] = {{"layer_sizes", m.layer_sizes},   {"weights", m.weights},
                    {"biases", m.biases},             {"hidden_activation", m.hidden_activation},
                    {"seed", m.seed},                 {"final_loss", m.final_loss}};
    }
    if (model.anfis.has_value()) {
        const auto& a = *model.anfis;
        nlohmann::json rules = nlohmann::json::array();
        for (const auto& r : a.rules) {
            nlohmann::json ants = nlohmann::json::array();
            for (const auto& ant : r.antecedents) {
                ants.push_back({{"input", ant.input}, {"invert", ant.invert}});
            }
            rules.push_back(
                {{"antecedents", std::move(ants)}, {"coeffs", r.coeffs}, {"bias", r.bias}});
        }
        j["anfis"] = {{"classes", a.classes},
                      {"centers", a.centers},
                      {"steepness", a.steepness},
                      {"rules", std::move(rules)},
                      {"output_threshold", a.output_threshold},
                      {"seed", a.seed},
                      {"final_loss", a.final_loss}};
    }
    write_json_file(path, j);
}

FusionModel read_model_json(const std::string& path) {
    const auto j = read_json(path);
    FusionModel model;
    model.kind = fusion_model_from_string(j.at("kind").get<std::string>());
    model.combo = combo_from_string(j.at("combo").get<std::string>());
    model.feature_type = feature_type_from_string(j.at("feature_type").get<std::string>());
    model.classes = j.at("classes").get<std::vector<std::string>>();
    for (const auto& t : j.at("thresholds")) model.thresholds.push_back(threshold_from_json(t));
    model.normalize = j.at("normalize").get<bool>();
    model.mlp_decision_threshold = j.at("mlp_decision_threshold").get<double>();
    if (j.contains("mlp")) {
        MlpModel m;
        const auto& jm = j.at("mlp");
        m.layer_sizes = jm.at("layer_sizes").get<std::vector<std::size_t>>();
        m.weights = jm.at("weights").get<std::vector<std::vector<double>>>();
        m.biases = jm.at("biases").get<std::vector<std::vector<double>>>();
        m.hidden_activation = jm.at("hidden_activation").get<std::string>();
        m.seed = jm.at("seed").get<std::uint64_t>();
        m.final_loss = jm.at("final_loss").get<double>();
        model.mlp = std::move(m);
    }
    if (j.contains("anfis")) {
        AnfisModel a;
        const auto& ja = j.at("anfis");
        a.classes = ja.at("classes").get<std::vector<std::string>>();
        a.centers = ja.at("centers").get<std::vector<double>>();
        a.steepness = ja.at("steepness").get<std::vector<double>>();
        for (const auto& jr : ja.at("rules")) {
            AnfisRule r;
            for (const auto& ant : jr.at("antecedents")) {
                r.antecedents.push_back(
                    {ant.at("input").get<std::size_t>(), ant.at("invert").get<bool>()});
            }
            r.coeffs = jr.at("coeffs").get<std::vector<double>>();
            r.bias = jr.at("bias").get<double>();
            a.rules.push_back(std::move(r));
        }
        a.output_threshold = ja.at("output_threshold").get<double>();
        a.seed = ja.at("seed").get<std::uint64_t>();
        a.final_loss = ja.at("final_loss").get<double>();
        model.anfis = std::move(a);
    }
    return model;
}

void write_report_json(const std::string& path, nlohmann::json report) {
    report["format_version"] = kFormatVersion;
    write_json_file(path, report);
}

}  // namespace detfuse

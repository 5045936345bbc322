#include "spotboost/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spotboost/ensemble.hpp"

namespace spotboost {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

json parse_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

// Shortest representation that parses back to the identical double.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string quote(const std::string& s) { return json(s).dump(); }

ClassIndex class_index_of(const std::vector<std::string>& classes, const std::string& label,
                          const std::string& context) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] == label) {
            return static_cast<ClassIndex>(i);
        }
    }
    throw ValidationError(context + ": unknown label '" + label + "'");
}

template <typename Fn>
auto guarding_json(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void fnv1a(std::uint64_t& h, const std::string& s) {
    for (const char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    h ^= 0x1f;  // field separator
    h *= 1099511628211ULL;
}

std::string fingerprint_fields(
    const std::vector<std::tuple<std::string, std::string, std::string, int, int>>& rows) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& [id, arch, opt, stride, delta] : rows) {
        fnv1a(h, id);
        fnv1a(h, arch);
        fnv1a(h, opt);
        fnv1a(h, std::to_string(stride));
        fnv1a(h, std::to_string(delta));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::kNoImprovement ? "no-improvement" : "max-iters";
}

StopReason stop_reason_from(const std::string& name, const std::string& path) {
    if (name == "no-improvement") {
        return StopReason::kNoImprovement;
    }
    if (name == "max-iters") {
        return StopReason::kMaxIters;
    }
    throw FormatError(path + ": unknown stop reason '" + name + "'");
}

}  // namespace

const VideoInfo& Manifest::video(const std::string& video_id) const {
    for (const VideoInfo& v : videos) {
        if (v.video_id == video_id) {
            return v;
        }
    }
    throw LookupError("manifest has no video '" + video_id + "'");
}

ClassIndex Manifest::class_index(const std::string& label) const {
    return class_index_of(classes, label, "manifest");
}

const std::vector<std::string>& Manifest::split(const std::string& name) const {
    const auto it = splits.find(name);
    if (it == splits.end()) {
        throw LookupError("manifest has no split '" + name + "'");
    }
    return it->second;
}

void Manifest::validate() const {
    if (classes.empty()) {
        throw ValidationError("manifest declares no classes");
    }
    if (std::set<std::string>(classes.begin(), classes.end()).size() != classes.size()) {
        throw ValidationError("manifest class names are not unique");
    }
    std::set<std::string> video_ids;
    for (const VideoInfo& v : videos) {
        if (!(v.fps > 0.0) || v.num_frames < 1) {
            throw ValidationError("manifest video '" + v.video_id + "' has invalid fps or frames");
        }
        if (!video_ids.insert(v.video_id).second) {
            throw ValidationError("manifest video '" + v.video_id + "' appears twice");
        }
    }
    for (const auto& [name, members] : splits) {
        for (const std::string& id : members) {
            if (video_ids.count(id) == 0) {
                throw ValidationError("split '" + name + "' references unknown video '" + id +
                                      "'");
            }
        }
    }
    std::set<std::string> candidate_ids;
    for (const CandidateEntry& c : candidates) {
        if (!candidate_ids.insert(c.id).second) {
            throw ValidationError("candidate '" + c.id + "' appears twice");
        }
        for (const auto& [name, members] : splits) {
            for (const std::string& id : members) {
                if (c.score_paths.count(id) == 0) {
                    throw ValidationError("candidate '" + c.id + "' has no scores for video '" +
                                          id + "' of split '" + name + "'");
                }
            }
        }
    }
}

Manifest read_manifest(const std::string& path) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        Manifest m;
        for (const auto& cls : doc.at("classes")) {
            m.classes.push_back(cls.get<std::string>());
        }
        for (const auto& v : doc.at("videos")) {
            m.videos.push_back(VideoInfo{v.at("video_id").get<std::string>(),
                                         v.at("fps").get<double>(),
                                         v.at("num_frames").get<FrameIndex>()});
        }
        for (const auto& [name, members] : doc.at("splits").items()) {
            std::vector<std::string> ids;
            for (const auto& id : members) {
                ids.push_back(id.get<std::string>());
            }
            m.splits.emplace(name, std::move(ids));
        }
        for (const auto& c : doc.at("candidates")) {
            CandidateEntry entry;
            entry.id = c.at("id").get<std::string>();
            entry.arch_tag = c.at("arch_tag").get<std::string>();
            entry.optimizer_tag = c.at("optimizer_tag").get<std::string>();
            entry.stride_s = c.at("stride_s").get<int>();
            entry.delta = c.at("delta").get<int>();
            for (const auto& [vid, p] : c.at("scores").items()) {
                entry.score_paths.emplace(vid, p.get<std::string>());
            }
            m.candidates.push_back(std::move(entry));
        }
        m.validate();
        return m;
    });
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    manifest.validate();
    json doc;
    doc["classes"] = manifest.classes;
    doc["videos"] = json::array();
    for (const VideoInfo& v : manifest.videos) {
        doc["videos"].push_back(
            {{"video_id", v.video_id}, {"fps", v.fps}, {"num_frames", v.num_frames}});
    }
    doc["splits"] = json::object();
    for (const auto& [name, members] : manifest.splits) {
        doc["splits"][name] = members;
    }
    doc["candidates"] = json::array();
    for (const CandidateEntry& c : manifest.candidates) {
        json scores = json::object();
        for (const auto& [vid, p] : c.score_paths) {
            scores[vid] = p;
        }
        doc["candidates"].push_back({{"id", c.id},
                                     {"arch_tag", c.arch_tag},
                                     {"optimizer_tag", c.optimizer_tag},
                                     {"stride_s", c.stride_s},
                                     {"delta", c.delta},
                                     {"scores", scores}});
    }
    write_file(path, doc.dump(2) + "\n");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
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

double parse_score(const std::string& field, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || field.empty()) {
        throw FormatError(path + " line " + std::to_string(line_no) + ": bad number '" + field +
                          "'");
    }
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw FormatError(path + " line " + std::to_string(line_no) + ": value " + field +
                          " outside [0,1]");
    }
    return value;
}

}  // namespace

ScoreMatrix read_scores(const std::string& path, const std::string& video_id,
                        const std::vector<std::string>& classes, FrameIndex expected_frames) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }

    std::string expected_header = "frame";
    for (const std::string& cls : classes) {
        expected_header += "," + cls;
    }

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw FormatError(path + ": empty file");
    }
    if (line != expected_header) {
        throw FormatError(path + " line 1: header '" + line + "' does not match manifest classes ('" +
                          expected_header + "')");
    }

    std::vector<double> values;
    FrameIndex next_frame = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.back() == '\r') {
            throw FormatError(path + " line " + std::to_string(line_no) +
                              ": blank line or CR line ending");
        }
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != classes.size() + 1) {
            throw FormatError(path + " line " + std::to_string(line_no) + ": expected " +
                              std::to_string(classes.size() + 1) + " fields, got " +
                              std::to_string(fields.size()));
        }
        FrameIndex frame = -1;
        const auto res =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), frame);
        if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size()) {
            throw FormatError(path + " line " + std::to_string(line_no) + ": bad frame index '" +
                              fields[0] + "'");
        }
        if (frame != next_frame) {
            if (frame > next_frame) {
                throw FormatError(path + " line " + std::to_string(line_no) + ": missing frame " +
                                  std::to_string(next_frame));
            }
            throw FormatError(path + " line " + std::to_string(line_no) +
                              ": frame index not strictly increasing");
        }
        for (std::size_t c = 0; c < classes.size(); ++c) {
            values.push_back(parse_score(fields[c + 1], path, line_no));
        }
        ++next_frame;
    }
    if (next_frame == 0) {
        throw FormatError(path + ": no data rows");
    }
    if (expected_frames >= 0 && next_frame != expected_frames) {
        throw FormatError(path + ": has " + std::to_string(next_frame) + " frames, manifest says " +
                          std::to_string(expected_frames));
    }

    ScoreMatrix m;
    m.video_id = video_id;
    m.num_frames = next_frame;
    m.num_classes = static_cast<ClassIndex>(classes.size());
    m.values = std::move(values);
    m.validate();
    return m;
}

void write_scores(const ScoreMatrix& scores, const std::vector<std::string>& classes,
                  const std::string& path) {
    scores.validate();
    if (static_cast<ClassIndex>(classes.size()) != scores.num_classes) {
        throw ShapeError("score matrix has " + std::to_string(scores.num_classes) +
                         " classes but " + std::to_string(classes.size()) + " names were given");
    }
    std::string buf = "frame";
    for (const std::string& cls : classes) {
        buf += "," + cls;
    }
    buf += "\n";
    for (FrameIndex f = 0; f < scores.num_frames; ++f) {
        buf += std::to_string(f);
        for (ClassIndex c = 0; c < scores.num_classes; ++c) {
            buf += ",";
            buf += format_double(scores.at(f, c));
        }
        buf += "\n";
    }
    write_file(path, buf);
}

GtFile read_gt(const std::string& path, const std::vector<std::string>& classes) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        GtFile out;
        for (const auto& v : doc) {
            GroundTruth gt;
            gt.video_id = v.at("video_id").get<std::string>();
            gt.fps = v.at("fps").get<double>();
            gt.num_frames = v.at("num_frames").get<FrameIndex>();
            for (const auto& e : v.at("events")) {
                Event event;
                event.frame = e.at("frame").get<FrameIndex>();
                event.cls = class_index_of(classes, e.at("label").get<std::string>(),
                                           path + " video '" + gt.video_id + "'");
                gt.events.push_back(event);
            }
            out.duplicates_dropped += gt.normalize();
            gt.validate();
            out.videos.push_back(std::move(gt));
        }
        return out;
    });
}

void write_gt(const std::vector<GroundTruth>& gts, const std::vector<std::string>& classes,
              const std::string& path) {
    json doc = json::array();
    for (const GroundTruth& gt : gts) {
        gt.validate();
        json events = json::array();
        for (const Event& e : gt.events) {
            if (e.cls < 0 || static_cast<std::size_t>(e.cls) >= classes.size()) {
                throw ValidationError("event class " + std::to_string(e.cls) +
                                      " has no manifest name");
            }
            events.push_back(
                {{"frame", e.frame}, {"label", classes[static_cast<std::size_t>(e.cls)]}});
        }
        doc.push_back({{"video_id", gt.video_id},
                       {"fps", gt.fps},
                       {"num_frames", gt.num_frames},
                       {"events", events}});
    }
    write_file(path, doc.dump(2) + "\n");
}

void write_spots(const std::vector<SpotPrediction>& preds, const std::vector<std::string>& classes,
                 const std::string& path) {
    std::vector<SpotPrediction> sorted = preds;
    std::sort(sorted.begin(), sorted.end(),
              [](const SpotPrediction& a, const SpotPrediction& b) {
                  return a.video_id < b.video_id;
              });

    // Hand-rolled writer: confidences must come out with exactly 6 decimal
    // digits, which a generic shortest-float serializer will not do.
    std::string buf;
    if (sorted.empty()) {
        buf = "[]\n";
        write_file(path, buf);
        return;
    }
    buf += "[\n";
    for (std::size_t v = 0; v < sorted.size(); ++v) {
        std::vector<Spot> spots = sorted[v].spots;
        std::sort(spots.begin(), spots.end(), [](const Spot& a, const Spot& b) {
            return a.cls != b.cls ? a.cls < b.cls : a.frame < b.frame;
        });
        buf += "  {\"video_id\": " + quote(sorted[v].video_id) + ", \"spots\": [";
        for (std::size_t s = 0; s < spots.size(); ++s) {
            const Spot& spot = spots[s];
            if (spot.cls < 0 || static_cast<std::size_t>(spot.cls) >= classes.size()) {
                throw ValidationError("spot class " + std::to_string(spot.cls) +
                                      " has no manifest name");
            }
            char conf[32];
            std::snprintf(conf, sizeof(conf), "%.6f", spot.confidence);
            buf += s == 0 ? "\n" : ",\n";
            buf += "    {\"frame\": " + std::to_string(spot.frame) + ", \"label\": " +
                   quote(classes[static_cast<std::size_t>(spot.cls)]) +
                   ", \"confidence\": " + conf + "}";
        }
        buf += spots.empty() ? "]}" : "\n  ]}";
        buf += v + 1 < sorted.size() ? ",\n" : "\n";
    }
    buf += "]\n";
    write_file(path, buf);
}

std::vector<SpotPrediction> read_spots(const std::string& path,
                                       const std::vector<std::string>& classes) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        std::vector<SpotPrediction> preds;
        for (const auto& v : doc) {
            SpotPrediction pred;
            pred.video_id = v.at("video_id").get<std::string>();
            for (const auto& s : v.at("spots")) {
                Spot spot;
                spot.frame = s.at("frame").get<FrameIndex>();
                spot.cls = class_index_of(classes, s.at("label").get<std::string>(),
                                          path + " video '" + pred.video_id + "'");
                spot.confidence = s.at("confidence").get<double>();
                pred.spots.push_back(spot);
            }
            preds.push_back(std::move(pred));
        }
        return preds;
    });
}

void write_labels(const std::vector<FrameLabels>& labels, const std::vector<std::string>& classes,
                  const std::string& path) {
    json doc = json::array();
    for (const FrameLabels& fl : labels) {
        json events = json::array();
        for (const Event& e : fl.source_events) {
            events.push_back(
                {{"frame", e.frame}, {"label", classes[static_cast<std::size_t>(e.cls)]}});
        }
        doc.push_back({{"video_id", fl.video_id},
                       {"delta", fl.delta},
                       {"collisions", fl.collision_count},
                       {"events", events},
                       {"labels", fl.labels}});
    }
    write_file(path, doc.dump(2) + "\n");
}

std::vector<FrameLabels> read_labels(const std::string& path,
                                     const std::vector<std::string>& classes) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        std::vector<FrameLabels> out;
        for (const auto& v : doc) {
            FrameLabels fl;
            fl.video_id = v.at("video_id").get<std::string>();
            fl.delta = v.at("delta").get<int>();
            fl.collision_count = v.at("collisions").get<std::int64_t>();
            for (const auto& e : v.at("events")) {
                Event event;
                event.frame = e.at("frame").get<FrameIndex>();
                event.cls = class_index_of(classes, e.at("label").get<std::string>(),
                                           path + " video '" + fl.video_id + "'");
                fl.source_events.push_back(event);
            }
            for (const auto& l : v.at("labels")) {
                const auto cls = l.get<ClassIndex>();
                if (cls != kBackground &&
                    (cls < 0 || static_cast<std::size_t>(cls) >= classes.size())) {
                    throw ValidationError(path + ": label index " + std::to_string(cls) +
                                          " outside the manifest classes");
                }
                fl.labels.push_back(cls);
            }
            out.push_back(std::move(fl));
        }
        return out;
    });
}

void write_clip_samples(const std::vector<ClipSample>& clips, const std::string& path) {
    json doc = json::array();
    for (const ClipSample& clip : clips) {
        doc.push_back({{"video_id", clip.video_id},
                       {"start_frame", clip.start_frame},
                       {"stride", clip.stride},
                       {"length", static_cast<std::int64_t>(clip.labels.size())},
                       {"labels", clip.labels}});
    }
    write_file(path, doc.dump(2) + "\n");
}

ClipScoresFile read_clip_scores(const std::string& path) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        ClipScoresFile out;
        out.video_id = doc.at("video_id").get<std::string>();
        out.num_classes = doc.at("num_classes").get<ClassIndex>();
        if (out.num_classes < 1) {
            throw FormatError(path + ": num_classes must be >= 1");
        }
        for (const auto& c : doc.at("clips")) {
            ClipScores clip;
            clip.video_id = out.video_id;
            clip.start_frame = c.at("start_frame").get<FrameIndex>();
            clip.stride_s = c.at("stride").get<FrameIndex>();
            for (const auto& row : c.at("values")) {
                if (static_cast<ClassIndex>(row.size()) != out.num_classes) {
                    throw FormatError(path + ": clip row has " + std::to_string(row.size()) +
                                      " values, expected " + std::to_string(out.num_classes));
                }
                for (const auto& value : row) {
                    clip.values.push_back(value.get<double>());
                }
            }
            out.clips.push_back(std::move(clip));
        }
        return out;
    });
}

void write_clip_scores(const ClipScoresFile& file, const std::string& path) {
    json clips = json::array();
    for (const ClipScores& clip : file.clips) {
        json values = json::array();
        const FrameIndex len = clip.length(file.num_classes);
        for (FrameIndex k = 0; k < len; ++k) {
            json row = json::array();
            for (ClassIndex c = 0; c < file.num_classes; ++c) {
                row.push_back(clip.values[static_cast<std::size_t>(k) * file.num_classes + c]);
            }
            values.push_back(std::move(row));
        }
        clips.push_back(
            {{"start_frame", clip.start_frame}, {"stride", clip.stride_s}, {"values", values}});
    }
    json doc = {{"video_id", file.video_id},
                {"num_classes", file.num_classes},
                {"clips", clips}};
    write_file(path, doc.dump(2) + "\n");
}

void write_ensemble(const EnsembleFile& file, const std::string& path) {
    file.spec.validate();
    json steps = json::array();
    for (const EnsembleStep& step : file.spec.steps) {
        steps.push_back({{"candidate", step.candidate_id}, {"weight", step.weight}});
    }
    json eff = json::array();
    for (const auto& [id, weight] : effective_weights(file.spec)) {
        eff.push_back({{"candidate", id}, {"weight", weight}});
    }
    json iterations = json::array();
    for (const IterationRecord& rec : file.trace.iterations) {
        iterations.push_back({{"iteration", rec.iteration},
                              {"candidate", rec.candidate_id},
                              {"weight", rec.weight},
                              {"map", rec.validation_map},
                              {"objective", rec.objective}});
    }
    json doc;
    doc["pool_hash"] = file.pool_hash;
    doc["final_map"] = file.final_map;
    doc["config"] = {{"weight_grid", file.config.weight_grid},
                     {"max_iters", file.config.max_iters},
                     {"tolerance_sec", file.config.tolerance_sec},
                     {"allow_reselection", file.config.allow_reselection},
                     {"min_improvement", file.config.min_improvement},
                     {"nms",
                      {{"window", file.config.nms.window},
                       {"frame_rate", file.config.nms.frame_rate},
                       {"threshold", file.config.nms.threshold}}}};
    doc["steps"] = steps;
    doc["effective_weights"] = eff;
    doc["trace"] = {{"iterations", iterations},
                    {"stop_reason", stop_reason_name(file.trace.stop_reason)}};
    write_file(path, doc.dump(2) + "\n");
}

EnsembleFile read_ensemble(const std::string& path) {
    const json doc = parse_json(path);
    return guarding_json(path, [&] {
        EnsembleFile file;
        file.pool_hash = doc.at("pool_hash").get<std::string>();
        file.final_map = doc.at("final_map").get<double>();
        const json& cfg = doc.at("config");
        file.config.weight_grid.clear();
        for (const auto& w : cfg.at("weight_grid")) {
            file.config.weight_grid.push_back(w.get<double>());
        }
        file.config.max_iters = cfg.at("max_iters").get<int>();
        file.config.tolerance_sec = cfg.at("tolerance_sec").get<double>();
        file.config.allow_reselection = cfg.at("allow_reselection").get<bool>();
        file.config.min_improvement = cfg.at("min_improvement").get<double>();
        const json& nms = cfg.at("nms");
        file.config.nms.window = nms.at("window").get<FrameIndex>();
        file.config.nms.frame_rate = nms.at("frame_rate").get<double>();
        file.config.nms.threshold = nms.at("threshold").get<double>();
        for (const auto& s : doc.at("steps")) {
            file.spec.steps.push_back(
                EnsembleStep{s.at("candidate").get<std::string>(), s.at("weight").get<double>()});
        }
        const json& trace = doc.at("trace");
        for (const auto& it : trace.at("iterations")) {
            file.trace.iterations.push_back(IterationRecord{
                it.at("iteration").get<int>(), it.at("candidate").get<std::string>(),
                it.at("weight").get<double>(), it.at("map").get<double>(),
                it.at("objective").get<double>()});
        }
        file.trace.stop_reason =
            stop_reason_from(trace.at("stop_reason").get<std::string>(), path);
        file.spec.validate();
        file.config.validate();
        return file;
    });
}

std::string pool_fingerprint(const std::vector<CandidateEntry>& candidates) {
    std::vector<std::tuple<std::string, std::string, std::string, int, int>> rows;
    rows.reserve(candidates.size());
    for (const CandidateEntry& c : candidates) {
        rows.emplace_back(c.id, c.arch_tag, c.optimizer_tag, c.stride_s, c.delta);
    }
    return fingerprint_fields(rows);
}

std::string pool_fingerprint(const std::vector<CandidateModel>& pool) {
    std::vector<std::tuple<std::string, std::string, std::string, int, int>> rows;
    rows.reserve(pool.size());
    for (const CandidateModel& c : pool) {
        rows.emplace_back(c.id, c.arch_tag, c.optimizer_tag, c.stride_s, c.delta);
    }
    return fingerprint_fields(rows);
}

void require_pool_match(const EnsembleFile& file, const Manifest& manifest) {
    const std::string actual = pool_fingerprint(manifest.candidates);
    if (actual != file.pool_hash) {
        throw ValidationError("ensemble was built for pool " + file.pool_hash +
                              " but the manifest pool is " + actual);
    }
}

std::vector<CandidateModel> load_pool(const Manifest& manifest, const std::string& manifest_dir,
                                      const std::vector<std::string>& video_ids) {
    std::vector<CandidateModel> pool;
    pool.reserve(manifest.candidates.size());
    for (const CandidateEntry& entry : manifest.candidates) {
        CandidateModel model;
        model.id = entry.id;
        model.arch_tag = entry.arch_tag;
        model.optimizer_tag = entry.optimizer_tag;
        model.stride_s = entry.stride_s;
        model.delta = entry.delta;
        for (const std::string& vid : video_ids) {
            const auto it = entry.score_paths.find(vid);
            if (it == entry.score_paths.end()) {
                throw LookupError("candidate '" + entry.id + "' has no score file for video '" +
                                  vid + "'");
            }
            const std::filesystem::path p = std::filesystem::path(manifest_dir) / it->second;
            model.scores.emplace(
                vid, read_scores(p.string(), vid, manifest.classes, manifest.video(vid).num_frames));
        }
        pool.push_back(std::move(model));
    }
    return pool;
}

std::vector<GroundTruth> filter_split(const std::vector<GroundTruth>& gts,
                                      const std::vector<std::string>& video_ids) {
    std::vector<GroundTruth> out;
    out.reserve(video_ids.size());
    for (const std::string& vid : video_ids) {
        const auto it = std::find_if(gts.begin(), gts.end(),
                                     [&vid](const GroundTruth& g) { return g.video_id == vid; });
        if (it == gts.end()) {
            throw LookupError("no ground truth for split video '" + vid + "'");
        }
        out.push_back(*it);
    }
    return out;
}

void write_dataset(const std::vector<GroundTruth>& gts, const std::vector<CandidateModel>& pool,
                   const std::vector<std::string>& classes, std::int64_t valid_videos,
                   const std::string& out_dir) {
    if (gts.empty() || pool.empty()) {
        throw ConfigError("dataset needs at least one video and one candidate");
    }
    if (valid_videos < 1 || valid_videos > static_cast<std::int64_t>(gts.size())) {
        throw ConfigError("valid_videos must lie in [1, num_videos]");
    }

    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    fs::create_directories(root / "scores");

    Manifest manifest;
    manifest.classes = classes;
    std::vector<std::string> valid_ids;
    std::vector<std::string> test_ids;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        const GroundTruth& gt = gts[i];
        manifest.videos.push_back(VideoInfo{gt.video_id, gt.fps, gt.num_frames});
        (static_cast<std::int64_t>(i) < valid_videos ? valid_ids : test_ids)
            .push_back(gt.video_id);
    }
    manifest.splits.emplace("valid", valid_ids);
    manifest.splits.emplace("test", test_ids);

    for (const CandidateModel& model : pool) {
        fs::create_directories(root / "scores" / model.id);
        CandidateEntry entry;
        entry.id = model.id;
        entry.arch_tag = model.arch_tag;
        entry.optimizer_tag = model.optimizer_tag;
        entry.stride_s = model.stride_s;
        entry.delta = model.delta;
        for (const GroundTruth& gt : gts) {
            const std::string rel = "scores/" + model.id + "/" + gt.video_id + ".csv";
            write_scores(model.scores_for(gt.video_id), classes, (root / rel).string());
            entry.score_paths.emplace(gt.video_id, rel);
        }
        manifest.candidates.push_back(std::move(entry));
    }

    write_gt(gts, classes, (root / "ground_truth.json").string());
    write_manifest(manifest, (root / "manifest.json").string());
}

}  // namespace spotboost

// Command-line surface for the spotboost pipeline: synthetic data generation,
// label dilation, clip sampling, clip aggregation, NMS, evaluation, greedy
// ensemble search and held-out prediction. Every subcommand is manifest
// driven; exit code 0 means the operation fully succeeded.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spotboost/dataprep.hpp"
#include "spotboost/ensemble.hpp"
#include "spotboost/formats.hpp"
#include "spotboost/metrics.hpp"
#include "spotboost/postprocess.hpp"
#include "spotboost/rng.hpp"
#include "spotboost/search.hpp"
#include "spotboost/synth.hpp"
#include "spotboost/types.hpp"

namespace {

using nlohmann::json;
using namespace spotboost;

std::string parent_dir(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path();
    return dir.empty() ? std::string(".") : dir.string();
}

// "lo:hi:step" or a comma-separated list; values snapped to 1e-9 so the grid
// comes out as 0.3, not 0.30000000000000004.
std::vector<double> parse_weight_grid(const std::string& text) {
    std::vector<double> grid;
    const auto snap = [](double v) { return std::round(v * 1e9) / 1e9; };
    if (text.find(':') != std::string::npos) {
        double lo = 0.0;
        double hi = 0.0;
        double step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0) {
            throw ConfigError("weight grid '" + text + "' is not lo:hi:step");
        }
        for (double v = lo; v <= hi + 1e-9; v += step) {
            grid.push_back(snap(v));
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t comma = text.find(',', start);
            const std::string field =
                text.substr(start, comma == std::string::npos ? comma : comma - start);
            try {
                grid.push_back(snap(std::stod(field)));
            } catch (const std::exception&) {
                throw ConfigError("bad weight grid value '" + field + "'");
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return grid;
}

SynthConfig parse_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    try {
        SynthConfig cfg;
        cfg.num_videos = doc.value("num_videos", cfg.num_videos);
        cfg.num_frames = doc.value("num_frames", cfg.num_frames);
        cfg.num_classes = doc.value("num_classes", cfg.num_classes);
        cfg.events_per_class = doc.value("events_per_class", cfg.events_per_class);
        cfg.fps = doc.value("fps", cfg.fps);
        cfg.seed = doc.value("seed", cfg.seed);
        for (const auto& c : doc.at("candidates")) {
            NoiseProfile p;
            p.id = c.at("id").get<std::string>();
            p.arch_tag = c.value("arch_tag", p.arch_tag);
            p.optimizer_tag = c.value("optimizer_tag", p.optimizer_tag);
            p.stride_s = c.value("stride_s", p.stride_s);
            p.delta = c.value("delta", p.delta);
            p.peak_width = c.value("peak_width", p.peak_width);
            p.miss_rate = c.value("miss_rate", p.miss_rate);
            p.false_alarm_rate = c.value("false_alarm_rate", p.false_alarm_rate);
            p.jitter_std = c.value("jitter_std", p.jitter_std);
            p.noise_floor = c.value("noise_floor", p.noise_floor);
            p.miss_rank_lo = c.value("miss_rank_lo", p.miss_rank_lo);
            p.miss_rank_hi = c.value("miss_rank_hi", p.miss_rank_hi);
            cfg.candidates.push_back(std::move(p));
        }
        return cfg;
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

std::vector<std::string> synth_class_names(const std::string& config_path, ClassIndex count) {
    std::ifstream in(config_path);
    json doc = json::parse(in);
    std::vector<std::string> names;
    if (doc.contains("class_names")) {
        for (const auto& n : doc["class_names"]) {
            names.push_back(n.get<std::string>());
        }
        if (static_cast<ClassIndex>(names.size()) != count) {
            throw ConfigError("class_names has " + std::to_string(names.size()) +
                              " entries, num_classes is " + std::to_string(count));
        }
    } else {
        for (ClassIndex c = 0; c < count; ++c) {
            names.push_back("class_" + std::to_string(c));
        }
    }
    return names;
}

json report_to_json(const EvalReport& report, const std::vector<std::string>& classes) {
    json per_class = json::array();
    for (const ClassReport& cr : report.per_class) {
        per_class.push_back({{"label", classes.at(static_cast<std::size_t>(cr.cls))},
                             {"ap", cr.ap},
                             {"gt_count", cr.gt_count},
                             {"true_positives", cr.true_positives},
                             {"false_positives", cr.false_positives}});
    }
    return {{"tolerance_sec", report.tolerance_sec}, {"map", report.map},
            {"classes", per_class}};
}

void print_trace(const SearchTrace& trace, const EnsembleSpec& spec) {
    std::printf("iter  member                  w_t      mAP  objective\n");
    for (const IterationRecord& rec : trace.iterations) {
        std::printf("%4d  %-20s  %5.3f  %7.5f  %+9.5f\n", rec.iteration,
                    rec.candidate_id.c_str(), rec.weight, rec.validation_map, rec.objective);
    }
    std::printf("stop: %s\n",
                trace.stop_reason == StopReason::kNoImprovement ? "no-improvement" : "max-iters");
    std::printf("effective weights:\n");
    for (const auto& [id, weight] : effective_weights(spec)) {
        std::printf("  %-20s  %6.4f\n", id.c_str(), weight);
    }
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
              bool seed_given, std::int64_t valid_videos) {
    SynthConfig cfg = parse_synth_config(config_path);
    if (seed_given) {
        cfg.seed = seed;
    }
    auto [gts, pool] = generate(cfg);
    if (valid_videos == 0) {
        valid_videos = (static_cast<std::int64_t>(gts.size()) + 1) / 2;
    }
    const std::vector<std::string> classes =
        synth_class_names(config_path, cfg.num_classes);
    write_dataset(gts, pool, classes, valid_videos, out_dir);
    std::cerr << "wrote " << gts.size() << " videos, " << pool.size() << " candidates to "
              << out_dir << "\n";
    return 0;
}

int cmd_labels(const std::string& manifest_path, const std::string& gt_path, int delta,
               const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const GtFile gt = read_gt(gt_path, manifest.classes);
    std::vector<FrameLabels> labels;
    labels.reserve(gt.videos.size());
    for (const GroundTruth& g : gt.videos) {
        labels.push_back(dilate_labels(g, delta));
    }
    write_labels(labels, manifest.classes, out_path);
    return 0;
}

int cmd_clips(const std::string& manifest_path, const std::string& labels_path, std::int64_t n,
              FrameIndex length, FrameIndex stride, std::uint64_t seed,
              const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const std::vector<FrameLabels> labels = read_labels(labels_path, manifest.classes);
    std::vector<ClipSample> clips;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        SamplingConfig cfg;
        cfg.num_clips = n;
        cfg.length = length;
        cfg.stride = stride;
        cfg.delta = labels[i].delta;
        cfg.seed = rng::mix(seed, i);
        for (ClipSample& clip : sample_clips(labels[i], cfg)) {
            clips.push_back(std::move(clip));
        }
    }
    write_clip_samples(clips, out_path);
    return 0;
}

int cmd_aggregate(const std::string& manifest_path, const std::string& clips_path,
                  const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const ClipScoresFile file = read_clip_scores(clips_path);
    if (file.num_classes != static_cast<ClassIndex>(manifest.classes.size())) {
        throw ValidationError("clip scores have " + std::to_string(file.num_classes) +
                              " classes, manifest has " +
                              std::to_string(manifest.classes.size()));
    }
    const VideoInfo& video = manifest.video(file.video_id);
    const ScoreMatrix merged = aggregate_clips(file.clips, video.num_frames, file.num_classes);
    write_scores(merged, manifest.classes, out_path);
    return 0;
}

int cmd_eval(const std::string& manifest_path, const std::string& pred_path,
             const std::string& gt_path, double tolerance_sec) {
    const Manifest manifest = read_manifest(manifest_path);
    const std::vector<SpotPrediction> preds = read_spots(pred_path, manifest.classes);
    const GtFile gt = read_gt(gt_path, manifest.classes);

    // The prediction file defines the evaluation universe: every video it
    // lists is scored, including ones with zero spots.
    std::vector<std::string> video_ids;
    video_ids.reserve(preds.size());
    for (const SpotPrediction& p : preds) {
        video_ids.push_back(p.video_id);
    }
    const std::vector<GroundTruth> gt_split = filter_split(gt.videos, video_ids);
    const EvalReport report = map_at_tolerance(preds, gt_split, tolerance_sec);
    std::cout << report_to_json(report, manifest.classes).dump(2) << "\n";
    return 0;
}

int cmd_nms(const std::string& manifest_path, const std::string& scores_path,
            const std::string& video_id, const NmsConfig& cfg, const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const ScoreMatrix scores =
        read_scores(scores_path, video_id, manifest.classes, manifest.video(video_id).num_frames);
    write_spots({temporal_nms(scores, cfg)}, manifest.classes, out_path);
    return 0;
}

int cmd_ensemble(const std::string& manifest_path, const std::string& gt_path,
                 const std::string& split, const SearchConfig& cfg, const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const GtFile gt = read_gt(gt_path, manifest.classes);
    const std::vector<std::string>& split_videos = manifest.split(split);
    const std::vector<GroundTruth> valid_gt = filter_split(gt.videos, split_videos);
    const std::vector<CandidateModel> pool =
        load_pool(manifest, parent_dir(manifest_path), split_videos);

    const SearchResult result = run_greedy_search(pool, valid_gt, cfg);
    print_trace(result.trace, result.spec);

    EnsembleFile file;
    file.spec = result.spec;
    file.trace = result.trace;
    file.config = cfg;
    file.pool_hash = pool_fingerprint(manifest.candidates);
    file.final_map = result.trace.iterations.back().validation_map;
    write_ensemble(file, out_path);
    return 0;
}

int cmd_predict(const std::string& manifest_path, const std::string& ensemble_path,
                const std::string& split, const std::string& out_path) {
    const Manifest manifest = read_manifest(manifest_path);
    const EnsembleFile file = read_ensemble(ensemble_path);
    require_pool_match(file, manifest);

    const std::vector<std::string>& split_videos = manifest.split(split);

    // Only the candidates the spec actually uses need their scores loaded.
    std::vector<std::string> needed;
    for (const EnsembleStep& step : file.spec.steps) {
        if (std::find(needed.begin(), needed.end(), step.candidate_id) == needed.end()) {
            needed.push_back(step.candidate_id);
        }
    }
    Manifest reduced = manifest;
    reduced.candidates.clear();
    for (const CandidateEntry& entry : manifest.candidates) {
        if (std::find(needed.begin(), needed.end(), entry.id) != needed.end()) {
            reduced.candidates.push_back(entry);
        }
    }
    const std::vector<CandidateModel> pool =
        load_pool(reduced, parent_dir(manifest_path), split_videos);

    std::vector<SpotPrediction> preds;
    preds.reserve(split_videos.size());
    for (const std::string& vid : split_videos) {
        preds.push_back(temporal_nms(realize(file.spec, pool, vid), file.config.nms));
    }
    write_spots(preds, manifest.classes, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy weighted ensembling and evaluation for temporal event spotting"};
    app.require_subcommand(1);

    // synth
    std::string synth_config;
    std::string synth_out_dir;
    std::uint64_t synth_seed = 0;
    std::int64_t synth_valid_videos = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark dataset");
    synth->add_option("--config", synth_config, "synthetic config JSON")->required();
    synth->add_option("--out-dir", synth_out_dir, "output directory")->required();
    auto* seed_opt = synth->add_option("--seed", synth_seed, "override the config seed");
    synth->add_option("--valid-videos", synth_valid_videos,
                      "videos in the valid split (default: half, rounded up)");

    // labels
    std::string labels_manifest, labels_gt, labels_out;
    int labels_delta = 0;
    auto* labels = app.add_subcommand("labels", "dilate point events into frame labels");
    labels->add_option("--manifest", labels_manifest)->required();
    labels->add_option("--gt", labels_gt)->required();
    labels->add_option("--delta", labels_delta)->required();
    labels->add_option("--out", labels_out)->required();

    // clips
    std::string clips_manifest, clips_labels, clips_out;
    std::int64_t clips_n = 1;
    FrameIndex clips_length = 100;
    FrameIndex clips_stride = 1;
    std::uint64_t clips_seed = 0;
    auto* clips = app.add_subcommand("clips", "sample fixed-length strided clips");
    clips->add_option("--manifest", clips_manifest)->required();
    clips->add_option("--labels", clips_labels)->required();
    clips->add_option("--n", clips_n)->required();
    clips->add_option("--length", clips_length, "clip length (default 100)");
    clips->add_option("--stride", clips_stride)->required();
    clips->add_option("--seed", clips_seed);
    clips->add_option("--out", clips_out)->required();

    // aggregate
    std::string agg_manifest, agg_clips, agg_out;
    auto* aggregate = app.add_subcommand("aggregate", "merge overlapped clip scores");
    aggregate->add_option("--manifest", agg_manifest)->required();
    aggregate->add_option("--clips", agg_clips)->required();
    aggregate->add_option("--out", agg_out)->required();

    // eval
    std::string eval_manifest, eval_pred, eval_gt;
    double eval_tolerance = 1.0;
    auto* eval = app.add_subcommand("eval", "evaluate spot predictions (mAP at tolerance)");
    eval->add_option("--manifest", eval_manifest)->required();
    eval->add_option("--pred", eval_pred)->required();
    eval->add_option("--gt", eval_gt)->required();
    eval->add_option("--tolerance-sec", eval_tolerance);

    // nms
    std::string nms_manifest, nms_scores, nms_video, nms_out;
    NmsConfig nms_cfg;
    auto* nms = app.add_subcommand("nms", "dense scores -> discrete spots");
    nms->add_option("--manifest", nms_manifest)->required();
    nms->add_option("--scores", nms_scores)->required();
    nms->add_option("--video", nms_video, "video id of the score file")->required();
    nms->add_option("--window", nms_cfg.window);
    nms->add_option("--frame-rate", nms_cfg.frame_rate);
    nms->add_option("--threshold", nms_cfg.threshold);
    nms->add_option("--out", nms_out)->required();

    // ensemble
    std::string ens_manifest, ens_gt, ens_out;
    std::string ens_split = "valid";
    std::string ens_grid = "0.1:1.0:0.1";
    SearchConfig ens_cfg;
    bool ens_no_reselect = false;
    auto* ensemble = app.add_subcommand("ensemble", "run the greedy ensemble search");
    ensemble->add_option("--manifest", ens_manifest)->required();
    ensemble->add_option("--gt", ens_gt)->required();
    ensemble->add_option("--split", ens_split, "validation split name (default valid)");
    ensemble->add_option("--weight-grid", ens_grid, "lo:hi:step or comma list");
    ensemble->add_option("--max-iters", ens_cfg.max_iters);
    ensemble->add_option("--tolerance-sec", ens_cfg.tolerance_sec);
    ensemble->add_option("--window", ens_cfg.nms.window);
    ensemble->add_option("--frame-rate", ens_cfg.nms.frame_rate);
    ensemble->add_option("--threshold", ens_cfg.nms.threshold);
    ensemble->add_option("--min-improvement", ens_cfg.min_improvement);
    ensemble->add_option("--jobs", ens_cfg.num_threads, "parallel evaluations (default 1)");
    ensemble->add_flag("--no-reselect", ens_no_reselect,
                       "forbid picking the same member twice");
    ensemble->add_option("--out", ens_out)->required();

    // predict
    std::string pred_manifest, pred_ensemble, pred_out;
    std::string pred_split = "test";
    auto* predict = app.add_subcommand("predict", "apply a saved ensemble to a split");
    predict->add_option("--manifest", pred_manifest)->required();
    predict->add_option("--ensemble", pred_ensemble)->required();
    predict->add_option("--split", pred_split, "split name (default test)");
    predict->add_option("--out", pred_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            return cmd_synth(synth_config, synth_out_dir, synth_seed, seed_opt->count() > 0,
                             synth_valid_videos);
        }
        if (labels->parsed()) {
            return cmd_labels(labels_manifest, labels_gt, labels_delta, labels_out);
        }
        if (clips->parsed()) {
            return cmd_clips(clips_manifest, clips_labels, clips_n, clips_length, clips_stride,
                             clips_seed, clips_out);
        }
        if (aggregate->parsed()) {
            return cmd_aggregate(agg_manifest, agg_clips, agg_out);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_manifest, eval_pred, eval_gt, eval_tolerance);
        }
        if (nms->parsed()) {
            return cmd_nms(nms_manifest, nms_scores, nms_video, nms_cfg, nms_out);
        }
        if (ensemble->parsed()) {
            ens_cfg.weight_grid = parse_weight_grid(ens_grid);
            ens_cfg.allow_reselection = !ens_no_reselect;
            return cmd_ensemble(ens_manifest, ens_gt, ens_split, ens_cfg, ens_out);
        }
        if (predict->parsed()) {
            return cmd_predict(pred_manifest, pred_ensemble, pred_split, pred_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

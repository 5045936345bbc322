#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "spotboost/formats.hpp"
#include "spotboost/rng.hpp"
#include "spotboost/synth.hpp"

#include "../testutil.hpp"

using namespace spotboost;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "spotboost_format_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

const std::vector<std::string> kClasses = {"pass", "drive"};

}  // namespace

TEST_CASE("score CSVs round-trip byte-identically") {
    std::mt19937_64 gen(71);
    const fs::path a = scratch() / "scores_a.csv";
    const fs::path b = scratch() / "scores_b.csv";

    const ScoreMatrix m = testutil::random_matrix(gen, "v", 3, 2);
    write_scores(m, kClasses, a.string());
    const ScoreMatrix back = read_scores(a.string(), "v", kClasses);
    CHECK(back.values == m.values);
    CHECK(back.num_frames == 3);
    write_scores(back, kClasses, b.string());
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("score parser cites the offending line") {
    const fs::path p = scratch() / "bad_value.csv";
    spit(p, "frame,pass,drive\n0,0.1,0.2\n1,0.3,0.4\n2,1.5,0.0\n");
    try {
        read_scores(p.string(), "v", kClasses);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("score parser rejects skipped and disordered frames") {
    const fs::path p = scratch() / "gap.csv";
    spit(p, "frame,pass,drive\n0,0.1,0.2\n2,0.3,0.4\n3,0.5,0.6\n");
    try {
        read_scores(p.string(), "v", kClasses);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        const std::string what = e.what();
        CHECK(what.find("missing frame 1") != std::string::npos);
        CHECK(what.find("line 3") != std::string::npos);
    }

    const fs::path q = scratch() / "dup.csv";
    spit(q, "frame,pass,drive\n0,0.1,0.2\n0,0.3,0.4\n");
    CHECK_THROWS_AS(read_scores(q.string(), "v", kClasses), FormatError);
}

TEST_CASE("score parser checks the header against the manifest classes") {
    const fs::path p = scratch() / "head.csv";
    spit(p, "frame,pass,shoot\n0,0.1,0.2\n");
    CHECK_THROWS_AS(read_scores(p.string(), "v", kClasses), FormatError);

    const fs::path q = scratch() / "short.csv";
    spit(q, "frame,pass,drive\n0,0.1\n");
    CHECK_THROWS_AS(read_scores(q.string(), "v", kClasses), FormatError);

    const fs::path r = scratch() / "frames.csv";
    spit(r, "frame,pass,drive\n0,0.1,0.2\n");
    CHECK_THROWS_AS(read_scores(r.string(), "v", kClasses, 5), FormatError);
}

TEST_CASE("ground truth reader validates labels and deduplicates") {
    const fs::path p = scratch() / "gt.json";
    spit(p, R"([
      {"video_id": "v", "fps": 25.0, "num_frames": 100,
       "events": [{"frame": 10, "label": "pass"}, {"frame": 10, "label": "pass"},
                  {"frame": 3, "label": "drive"}]},
      {"video_id": "w", "fps": 25.0, "num_frames": 50, "events": []}
    ])");
    const GtFile gt = read_gt(p.string(), kClasses);
    CHECK(gt.duplicates_dropped == 1);
    REQUIRE(gt.videos.size() == 2);
    CHECK(gt.videos[0].events.size() == 2);
    CHECK(gt.videos[0].events[0] == Event{3, 1});  // sorted on read
    CHECK(gt.videos[1].events.empty());

    const fs::path bad = scratch() / "gt_bad.json";
    spit(bad, R"([{"video_id": "v", "fps": 25.0, "num_frames": 100,
                   "events": [{"frame": 1, "label": "header"}]}])");
    try {
        read_gt(bad.string(), kClasses);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("header") != std::string::npos);
    }

    const fs::path range = scratch() / "gt_range.json";
    spit(range, R"([{"video_id": "v", "fps": 25.0, "num_frames": 100,
                     "events": [{"frame": 100, "label": "pass"}]}])");
    CHECK_THROWS_AS(read_gt(range.string(), kClasses), ValidationError);
}

TEST_CASE("spot files render empties, schemas and six decimals") {
    const fs::path empty = scratch() / "spots_empty.json";
    write_spots({}, kClasses, empty.string());
    CHECK(slurp(empty) == "[]\n");

    const fs::path one = scratch() / "spots_one.json";
    write_spots({{"v", {{7, 0, 0.9345129}}}}, kClasses, one.string());
    const std::string text = slurp(one);
    CHECK(text.find("0.934513") != std::string::npos);  // 6 digits, rounded

    const nlohmann::json doc = nlohmann::json::parse(text);
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["video_id"] == "v");
    CHECK(doc[0]["spots"][0]["frame"] == 7);
    CHECK(doc[0]["spots"][0]["label"] == "pass");
}

TEST_CASE("spot files round-trip ordering and values to 1e-6") {
    std::mt19937_64 gen(72);
    const fs::path p = scratch() / "spots_rt.json";
    std::vector<SpotPrediction> preds;
    preds.push_back(testutil::random_spots(gen, "b", 100, 2, 10));
    preds.push_back(testutil::random_spots(gen, "a", 100, 2, 10));
    write_spots(preds, kClasses, p.string());
    const std::vector<SpotPrediction> back = read_spots(p.string(), kClasses);
    REQUIRE(back.size() == 2);
    CHECK(back[0].video_id == "a");  // writer sorts videos
    CHECK(back[1].video_id == "b");
    for (const SpotPrediction& pred : back) {
        const auto& original = pred.video_id == "a" ? preds[1] : preds[0];
        REQUIRE(pred.spots.size() == original.spots.size());
        std::vector<Spot> sorted = original.spots;
        std::sort(sorted.begin(), sorted.end(), [](const Spot& x, const Spot& y) {
            return x.cls != y.cls ? x.cls < y.cls : x.frame < y.frame;
        });
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            CHECK(pred.spots[i].frame == sorted[i].frame);
            CHECK(pred.spots[i].cls == sorted[i].cls);
            CHECK(pred.spots[i].confidence ==
                  doctest::Approx(sorted[i].confidence).epsilon(1e-6));
        }
    }

    // a second write of what we read is byte-stable
    const fs::path p2 = scratch() / "spots_rt2.json";
    write_spots(back, kClasses, p2.string());
    CHECK(slurp(p) == slurp(p2));
}

TEST_CASE("writers produce input their readers accept on random data") {
    std::mt19937_64 gen(73);
    for (int trial = 0; trial < 20; ++trial) {
        const fs::path p = scratch() / ("fuzz_" + std::to_string(trial) + ".csv");
        const FrameIndex frames = 1 + static_cast<FrameIndex>(rng::bounded(gen, 40));
        const ScoreMatrix m = testutil::random_matrix(gen, "v", frames, 2);
        write_scores(m, kClasses, p.string());
        CHECK(read_scores(p.string(), "v", kClasses, frames).values == m.values);

        const fs::path g = scratch() / ("fuzz_gt_" + std::to_string(trial) + ".json");
        std::vector<GroundTruth> gts = {testutil::random_gt(gen, "v", 200, 2, 6)};
        write_gt(gts, kClasses, g.string());
        CHECK(read_gt(g.string(), kClasses).videos[0].events == gts[0].events);
    }
}

TEST_CASE("labels and clip scores round-trip through their files") {
    const fs::path p = scratch() / "labels.json";
    FrameLabels fl;
    fl.video_id = "v";
    fl.delta = 2;
    fl.collision_count = 1;
    fl.labels = {kBackground, 0, 0, 1, kBackground};
    fl.source_events = {{1, 0}, {3, 1}};
    write_labels({fl}, kClasses, p.string());
    const auto back = read_labels(p.string(), kClasses);
    REQUIRE(back.size() == 1);
    CHECK(back[0].labels == fl.labels);
    CHECK(back[0].delta == 2);
    CHECK(back[0].collision_count == 1);
    CHECK(back[0].source_events == fl.source_events);

    const fs::path c = scratch() / "clip_scores.json";
    ClipScoresFile file;
    file.video_id = "v";
    file.num_classes = 2;
    file.clips.push_back(ClipScores{"v", 0, 1, {0.1, 0.2, 0.3, 0.4}});
    file.clips.push_back(ClipScores{"v", 2, 1, {0.5, 0.6}});
    write_clip_scores(file, c.string());
    const ClipScoresFile cback = read_clip_scores(c.string());
    CHECK(cback.video_id == "v");
    CHECK(cback.num_classes == 2);
    REQUIRE(cback.clips.size() == 2);
    CHECK(cback.clips[0].values == file.clips[0].values);
    CHECK(cback.clips[1].start_frame == 2);
}

TEST_CASE("ensemble files round-trip losslessly and pin the pool") {
    const fs::path p = scratch() / "ensemble.json";
    EnsembleFile file;
    file.spec.steps = {{"a", 1.0}, {"b", 0.1 + 0.2}};  // awkward double on purpose
    file.trace.iterations = {{1, "a", 1.0, 0.8413, 0.8413}, {2, "b", 0.1 + 0.2, 0.86, 0.0187}};
    file.trace.stop_reason = StopReason::kMaxIters;
    file.config.weight_grid = default_weight_grid();
    file.config.tolerance_sec = 1.0;
    file.pool_hash = "fnv1a:0123456789abcdef";
    file.final_map = 0.86;
    write_ensemble(file, p.string());

    const EnsembleFile back = read_ensemble(p.string());
    CHECK(back.spec.steps == file.spec.steps);
    REQUIRE(back.trace.iterations.size() == 2);
    CHECK(back.trace.iterations[1].weight == file.spec.steps[1].weight);
    CHECK(back.trace.iterations[1].validation_map == 0.86);
    CHECK(back.trace.stop_reason == StopReason::kMaxIters);
    CHECK(back.config.weight_grid == file.config.weight_grid);
    CHECK(back.pool_hash == file.pool_hash);
    CHECK(back.final_map == 0.86);

    Manifest manifest;
    manifest.classes = kClasses;
    manifest.videos = {{"v", 25.0, 10}};
    manifest.candidates.push_back(CandidateEntry{"a", "arch", "opt", 1, 5, {{"v", "a.csv"}}});
    CHECK_THROWS_AS(require_pool_match(back, manifest), ValidationError);

    file.pool_hash = pool_fingerprint(manifest.candidates);
    write_ensemble(file, p.string());
    CHECK_NOTHROW(require_pool_match(read_ensemble(p.string()), manifest));
}

TEST_CASE("pool fingerprints agree across entries and models") {
    std::vector<CandidateEntry> entries = {
        CandidateEntry{"a", "rny008_gsm", "adamw", 1, 5, {}},
        CandidateEntry{"b", "enetb2_gsm", "adamw_swa", 2, 4, {}}};
    std::vector<CandidateModel> models(2);
    models[0].id = "a";
    models[0].arch_tag = "rny008_gsm";
    models[0].optimizer_tag = "adamw";
    models[0].stride_s = 1;
    models[0].delta = 5;
    models[1].id = "b";
    models[1].arch_tag = "enetb2_gsm";
    models[1].optimizer_tag = "adamw_swa";
    models[1].stride_s = 2;
    models[1].delta = 4;
    CHECK(pool_fingerprint(entries) == pool_fingerprint(models));

    models[1].delta = 2;
    CHECK(pool_fingerprint(entries) != pool_fingerprint(models));
}

TEST_CASE("manifests round-trip and validate coverage") {
    const fs::path p = scratch() / "manifest.json";
    Manifest m;
    m.classes = kClasses;
    m.videos = {{"v0", 25.0, 100}, {"v1", 30.0, 200}};
    m.splits = {{"valid", {"v0"}}, {"test", {"v1"}}};
    m.candidates.push_back(
        CandidateEntry{"a", "arch", "opt", 1, 5, {{"v0", "a/v0.csv"}, {"v1", "a/v1.csv"}}});
    write_manifest(m, p.string());
    const Manifest back = read_manifest(p.string());
    CHECK(back.classes == m.classes);
    CHECK(back.videos.size() == 2);
    CHECK(back.split("valid") == std::vector<std::string>{"v0"});
    CHECK(back.video("v1").num_frames == 200);
    CHECK(back.candidates[0].score_paths.at("v1") == "a/v1.csv");
    CHECK(back.class_index("drive") == 1);

    Manifest bad = m;
    bad.candidates[0].score_paths.erase("v1");
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    Manifest ghost = m;
    ghost.splits["valid"].push_back("nope");
    CHECK_THROWS_AS(ghost.validate(), ValidationError);
}

TEST_CASE("datasets written by the generator load back as equal pools") {
    SynthConfig cfg;
    cfg.num_videos = 2;
    cfg.num_frames = 300;
    cfg.num_classes = 2;
    cfg.events_per_class = 4.0;
    cfg.seed = 74;
    NoiseProfile p;
    p.id = "cand0";
    p.peak_width = 5;
    p.noise_floor = 0.05;
    cfg.candidates.push_back(p);
    auto [gts, pool] = generate(cfg);

    const fs::path dir = scratch() / "dataset";
    fs::remove_all(dir);
    write_dataset(gts, pool, {"c0", "c1"}, 1, dir.string());

    const Manifest manifest = read_manifest((dir / "manifest.json").string());
    manifest.validate();
    CHECK(manifest.split("valid").size() == 1);
    CHECK(manifest.split("test").size() == 1);

    const GtFile gt = read_gt((dir / "ground_truth.json").string(), manifest.classes);
    CHECK(gt.videos.size() == 2);
    CHECK(gt.videos[0].events == gts[0].events);

    const auto loaded = load_pool(manifest, dir.string(), manifest.split("valid"));
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].scores_for(gts[0].video_id).values ==
          pool[0].scores_for(gts[0].video_id).values);
}

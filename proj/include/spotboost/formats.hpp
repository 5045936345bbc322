#pragma once

#include <map>
#include <string>
#include <vector>

#include "spotboost/dataprep.hpp"
#include "spotboost/postprocess.hpp"
#include "spotboost/search.hpp"
#include "spotboost/types.hpp"

namespace spotboost {

struct VideoInfo {
    std::string video_id;
    double fps = 25.0;
    FrameIndex num_frames = 0;
};

struct CandidateEntry {
    std::string id;
    std::string arch_tag;
    std::string optimizer_tag;
    int stride_s = 1;
    int delta = 0;
    std::map<std::string, std::string> score_paths;  // video_id -> CSV path
};

// Dataset manifest: the single file tying class names, videos, splits and
// candidate score files together. Score paths are relative to the manifest's
// directory.
struct Manifest {
    std::vector<std::string> classes;
    std::vector<VideoInfo> videos;
    std::map<std::string, std::vector<std::string>> splits;
    std::vector<CandidateEntry> candidates;

    const VideoInfo& video(const std::string& video_id) const;
    ClassIndex class_index(const std::string& label) const;
    const std::vector<std::string>& split(const std::string& name) const;

    // Checks split/candidate coverage and id uniqueness.
    void validate() const;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const Manifest& manifest, const std::string& path);

// Dense score CSV: header `frame,<class_0>,...`, one row per frame with
// contiguous frame indices starting at 0, values in [0,1]. The reader is
// strict and cites the offending line number; the writer produces bytes the
// reader maps back to the identical matrix (shortest round-trip floats).
// expected_frames >= 0 additionally pins the row count.
ScoreMatrix read_scores(const std::string& path, const std::string& video_id,
                        const std::vector<std::string>& classes, FrameIndex expected_frames = -1);
void write_scores(const ScoreMatrix& scores, const std::vector<std::string>& classes,
                  const std::string& path);

struct GtFile {
    std::vector<GroundTruth> videos;
    std::int64_t duplicates_dropped = 0;  // exact duplicate events removed on read
};

// Ground-truth JSON: a list of {video_id, fps, num_frames, events:[{frame,
// label}]}. Labels must be manifest classes; events come back sorted.
GtFile read_gt(const std::string& path, const std::vector<std::string>& classes);
void write_gt(const std::vector<GroundTruth>& gts, const std::vector<std::string>& classes,
              const std::string& path);

// Spot JSON: a list of {video_id, spots:[{frame, label, confidence}]} with
// confidences rendered to 6 decimal digits and stable (video_id, class,
// frame) ordering.
void write_spots(const std::vector<SpotPrediction>& preds, const std::vector<std::string>& classes,
                 const std::string& path);
std::vector<SpotPrediction> read_spots(const std::string& path,
                                       const std::vector<std::string>& classes);

void write_labels(const std::vector<FrameLabels>& labels, const std::vector<std::string>& classes,
                  const std::string& path);
std::vector<FrameLabels> read_labels(const std::string& path,
                                     const std::vector<std::string>& classes);

void write_clip_samples(const std::vector<ClipSample>& clips, const std::string& path);

struct ClipScoresFile {
    std::string video_id;
    ClassIndex num_classes = 0;
    std::vector<ClipScores> clips;
};

ClipScoresFile read_clip_scores(const std::string& path);
void write_clip_scores(const ClipScoresFile& file, const std::string& path);

// Serialized search output: the spec, its trace, the configuration it was
// produced under, and a fingerprint of the candidate pool. Applying an
// ensemble against a pool with a different fingerprint is refused.
struct EnsembleFile {
    EnsembleSpec spec;
    SearchTrace trace;
    SearchConfig config;
    std::string pool_hash;
    double final_map = 0.0;
};

void write_ensemble(const EnsembleFile& file, const std::string& path);
EnsembleFile read_ensemble(const std::string& path);

// FNV-1a over candidate identity metadata, in pool order. Both overloads
// produce the same digest for the same candidate set.
std::string pool_fingerprint(const std::vector<CandidateEntry>& candidates);
std::string pool_fingerprint(const std::vector<CandidateModel>& pool);

// Throws ValidationError when the ensemble's pool hash does not match.
void require_pool_match(const EnsembleFile& file, const Manifest& manifest);

// Loads every candidate's scores for the given videos, resolving paths
// against the manifest directory.
std::vector<CandidateModel> load_pool(const Manifest& manifest, const std::string& manifest_dir,
                                      const std::vector<std::string>& video_ids);

// Keeps only the ground truth of the listed videos, in list order.
std::vector<GroundTruth> filter_split(const std::vector<GroundTruth>& gts,
                                      const std::vector<std::string>& video_ids);

// Writes a complete dataset (manifest + ground truth + per-candidate score
// CSVs) under out_dir; the first valid_videos videos form the "valid" split
// and the rest the "test" split.
void write_dataset(const std::vector<GroundTruth>& gts, const std::vector<CandidateModel>& pool,
                   const std::vector<std::string>& classes, std::int64_t valid_videos,
                   const std::string& out_dir);

}  // namespace spotboost

#pragma once

#include <vector>

#include "spotboost/types.hpp"

namespace spotboost {

struct NmsConfig {
    FrameIndex window = 10;    // suppression half-width, in frames
    double frame_rate = 25.0;  // used for second <-> frame conversions elsewhere
    double threshold = 0.01;   // minimum confidence for a spot

    void validate() const;  // ConfigError on out-of-range fields
};

// Scores predicted for one sliding clip: L frames at indices
// start_frame + k * stride_s for k in [0, L), each with num_classes values.
struct ClipScores {
    std::string video_id;
    FrameIndex start_frame = 0;
    FrameIndex stride_s = 1;
    std::vector<double> values;  // row-major, L x num_classes

    FrameIndex length(ClassIndex num_classes) const {
        return static_cast<FrameIndex>(values.size()) / num_classes;
    }
};

// Greedy temporal non-maximum suppression, per class: repeatedly take the
// highest-scoring unsuppressed frame with score >= threshold (ties: lower
// frame index), emit it as a spot, and suppress every frame within +-window.
// Output spots are sorted by (class, frame).
SpotPrediction temporal_nms(const ScoreMatrix& scores, const NmsConfig& cfg);

// Merges overlapped sliding-clip scores into one dense matrix: each frame's
// class scores are the arithmetic mean over all clips covering that frame.
// Throws CoverageError if any frame is covered by no clip.
ScoreMatrix aggregate_clips(const std::vector<ClipScores>& clips, FrameIndex num_frames,
                            ClassIndex num_classes);

}  // namespace spotboost

#pragma once

#include <vector>

#include "spotboost/types.hpp"

namespace spotboost {

// Per-frame class assignment derived from point events: each frame is either
// background or exactly one event class.
struct FrameLabels {
    std::string video_id;
    std::vector<ClassIndex> labels;  // kBackground or a class index, one per frame
    int delta = 0;                   // dilation half-width used to build this
    std::vector<Event> source_events;
    std::int64_t collision_count = 0;  // frames reached by >= 2 events of different classes
};

struct SamplingConfig {
    std::int64_t num_clips = 1;
    FrameIndex length = 100;
    FrameIndex stride = 1;
    int delta = 0;  // carried for provenance; dilation happens in dilate_labels
    std::uint64_t seed = 0;

    void validate() const;
};

struct ClipSample {
    std::string video_id;
    FrameIndex start_frame = 0;
    FrameIndex stride = 1;
    std::vector<FrameIndex> frame_indices;  // start + k * stride, k in [0, L)
    std::vector<ClassIndex> labels;         // per clip frame
};

// Number of source frames a clip of `length` frames at `stride` spans.
inline FrameIndex clip_span(FrameIndex length, FrameIndex stride) {
    return (length - 1) * stride + 1;
}

// Spreads each point event over the frames within +-delta of it. Frames
// reached by several events take the nearest event's class; distance ties go
// to the earlier event frame, then the lower class index. Frames reached by
// events of more than one class are tallied in collision_count.
FrameLabels dilate_labels(const GroundTruth& gt, int delta);

// Draws num_clips start frames uniformly from the valid range (with
// replacement) using the seeded generator, and attaches per-frame labels.
// Throws SizeError when the video is shorter than the clip span.
std::vector<ClipSample> sample_clips(const FrameLabels& labels, const SamplingConfig& cfg);

// The five (stride, delta) presets used to build training sample sets, all
// with clip length 100.
std::vector<SamplingConfig> dataset_settings();

}  // namespace spotboost

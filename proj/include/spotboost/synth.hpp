#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spotboost/types.hpp"

namespace spotboost {

// Noise profile of one synthetic candidate. Scores are background noise in
// [0, noise_floor] with a triangular peak per detected event, centered at the
// jittered event frame. Peak heights are drawn from (max(noise_floor, 0.5), 1]
// so peaks always clear both the noise and the default NMS threshold.
struct NoiseProfile {
    std::string id;
    std::string arch_tag = "synthetic";
    std::string optimizer_tag = "synthetic";
    int stride_s = 1;  // provenance tags only; nothing is trained here
    int delta = 0;

    FrameIndex peak_width = 6;
    double miss_rate = 0.0;         // independent per-event miss probability
    double false_alarm_rate = 0.0;  // expected spurious peaks per 1000 frames
    double jitter_std = 0.0;        // stddev of the peak-center offset, frames
    double noise_floor = 0.0;       // background noise level

    // Structured misses: the candidate drops every event whose rank in a
    // seeded global permutation falls in [miss_rank_lo, miss_rank_hi) as a
    // fraction of all events. Candidates with disjoint ranges miss disjoint
    // event sets, which is how complementary pools are built.
    double miss_rank_lo = 0.0;
    double miss_rank_hi = 0.0;
};

struct SynthConfig {
    std::int64_t num_videos = 5;
    FrameIndex num_frames = 2000;  // per video
    ClassIndex num_classes = 3;
    double events_per_class = 8.0;  // mean per (video, class)
    double fps = 25.0;
    std::vector<NoiseProfile> candidates;
    std::uint64_t seed = 0;

    void validate() const;  // ConfigError on out-of-range fields
};

// Generates ground truth plus a pool of noisy candidates. Event instants are
// placed uniformly at random with per-class minimum separation twice the
// largest peak width, so a noiseless candidate's peaks are recoverable
// exactly. Fully deterministic for a given seed; per-video and per-candidate
// streams use derived sub-seeds.
std::pair<std::vector<GroundTruth>, std::vector<CandidateModel>> generate(const SynthConfig& cfg);

}  // namespace spotboost

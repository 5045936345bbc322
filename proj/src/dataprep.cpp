#include "spotboost/dataprep.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "spotboost/rng.hpp"

namespace spotboost {

void SamplingConfig::validate() const {
    if (num_clips < 1) {
        throw ConfigError("num_clips must be >= 1");
    }
    if (length < 1) {
        throw ConfigError("clip length must be >= 1");
    }
    if (stride < 1) {
        throw ConfigError("clip stride must be >= 1");
    }
    if (delta < 0) {
        throw ConfigError("delta must be >= 0");
    }
}

FrameLabels dilate_labels(const GroundTruth& gt, int delta) {
    gt.validate();
    if (delta < 0) {
        throw DomainError("delta must be >= 0, got " + std::to_string(delta));
    }

    FrameLabels out;
    out.video_id = gt.video_id;
    out.delta = delta;
    out.source_events = gt.events;
    out.labels.assign(static_cast<std::size_t>(gt.num_frames), kBackground);

    // Per frame, the winning event is the lexicographic minimum of
    // (distance, event frame, event class).
    std::vector<FrameIndex> best_dist(static_cast<std::size_t>(gt.num_frames),
                                      std::numeric_limits<FrameIndex>::max());
    std::vector<FrameIndex> best_event_frame(static_cast<std::size_t>(gt.num_frames), 0);
    std::vector<ClassIndex> first_class(static_cast<std::size_t>(gt.num_frames), kBackground);
    std::vector<bool> multi_class(static_cast<std::size_t>(gt.num_frames), false);

    for (const Event& event : gt.events) {
        const FrameIndex lo = std::max<FrameIndex>(0, event.frame - delta);
        const FrameIndex hi = std::min<FrameIndex>(gt.num_frames - 1, event.frame + delta);
        for (FrameIndex f = lo; f <= hi; ++f) {
            const auto idx = static_cast<std::size_t>(f);
            if (first_class[idx] == kBackground) {
                first_class[idx] = event.cls;
            } else if (first_class[idx] != event.cls) {
                multi_class[idx] = true;
            }

            const FrameIndex dist = f >= event.frame ? f - event.frame : event.frame - f;
            const bool wins =
                dist < best_dist[idx] ||
                (dist == best_dist[idx] && (event.frame < best_event_frame[idx] ||
                                            (event.frame == best_event_frame[idx] &&
                                             event.cls < out.labels[idx])));
            if (wins) {
                best_dist[idx] = dist;
                best_event_frame[idx] = event.frame;
                out.labels[idx] = event.cls;
            }
        }
    }

    for (bool flag : multi_class) {
        out.collision_count += flag ? 1 : 0;
    }
    return out;
}

std::vector<ClipSample> sample_clips(const FrameLabels& labels, const SamplingConfig& cfg) {
    cfg.validate();
    const auto num_frames = static_cast<FrameIndex>(labels.labels.size());
    const FrameIndex span = clip_span(cfg.length, cfg.stride);
    if (num_frames < span) {
        throw SizeError("video '" + labels.video_id + "' has " + std::to_string(num_frames) +
                        " frames, shorter than the clip span " + std::to_string(span));
    }

    std::mt19937_64 gen(cfg.seed);
    std::vector<ClipSample> clips;
    clips.reserve(static_cast<std::size_t>(cfg.num_clips));
    for (std::int64_t i = 0; i < cfg.num_clips; ++i) {
        ClipSample clip;
        clip.video_id = labels.video_id;
        clip.stride = cfg.stride;
        clip.start_frame = static_cast<FrameIndex>(
            rng::bounded(gen, static_cast<std::uint64_t>(num_frames - span + 1)));
        clip.frame_indices.reserve(static_cast<std::size_t>(cfg.length));
        clip.labels.reserve(static_cast<std::size_t>(cfg.length));
        for (FrameIndex k = 0; k < cfg.length; ++k) {
            const FrameIndex frame = clip.start_frame + k * cfg.stride;
            clip.frame_indices.push_back(frame);
            clip.labels.push_back(labels.labels[static_cast<std::size_t>(frame)]);
        }
        clips.push_back(std::move(clip));
    }
    return clips;
}

std::vector<SamplingConfig> dataset_settings() {
    std::vector<SamplingConfig> settings;
    for (const auto& [stride, delta] : {std::pair<FrameIndex, int>{1, 5},
                                        {1, 4},
                                        {2, 5},
                                        {2, 4},
                                        {2, 2}}) {
        SamplingConfig cfg;
        cfg.length = 100;
        cfg.stride = stride;
        cfg.delta = delta;
        settings.push_back(cfg);
    }
    return settings;
}

}  // namespace spotboost

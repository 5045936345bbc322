#include "spotboost/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spotboost {

void NmsConfig::validate() const {
    if (window < 1) {
        throw ConfigError("NMS window must be >= 1");
    }
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
        throw ConfigError("NMS frame rate must be positive");
    }
    if (!std::isfinite(threshold) || threshold < 0.0 || threshold > 1.0) {
        throw ConfigError("NMS threshold must lie in [0,1]");
    }
}

SpotPrediction temporal_nms(const ScoreMatrix& scores, const NmsConfig& cfg) {
    scores.validate();
    cfg.validate();

    SpotPrediction pred;
    pred.video_id = scores.video_id;

    const FrameIndex n = scores.num_frames;
    std::vector<std::pair<double, FrameIndex>> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<bool> suppressed(static_cast<std::size_t>(n));

    for (ClassIndex cls = 0; cls < scores.num_classes; ++cls) {
        // Visiting frames in (score desc, frame asc) order and skipping
        // suppressed ones selects exactly the greedy repeated-argmax peaks.
        order.clear();
        for (FrameIndex f = 0; f < n; ++f) {
            const double score = scores.at(f, cls);
            if (score >= cfg.threshold) {
                order.emplace_back(score, f);
            }
        }
        std::sort(order.begin(), order.end(),
                  [](const std::pair<double, FrameIndex>& a,
                     const std::pair<double, FrameIndex>& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                  });
        std::fill(suppressed.begin(), suppressed.end(), false);

        for (const auto& [score, f] : order) {
            if (suppressed[static_cast<std::size_t>(f)]) {
                continue;
            }
            pred.spots.push_back(Spot{f, cls, score});
            const FrameIndex lo = std::max<FrameIndex>(0, f - cfg.window);
            const FrameIndex hi = std::min<FrameIndex>(n - 1, f + cfg.window);
            for (FrameIndex s = lo; s <= hi; ++s) {
                suppressed[static_cast<std::size_t>(s)] = true;
            }
        }
    }

    std::sort(pred.spots.begin(), pred.spots.end(), [](const Spot& a, const Spot& b) {
        return a.cls != b.cls ? a.cls < b.cls : a.frame < b.frame;
    });
    return pred;
}

ScoreMatrix aggregate_clips(const std::vector<ClipScores>& clips, FrameIndex num_frames,
                            ClassIndex num_classes) {
    if (clips.empty()) {
        throw CoverageError("no clips to aggregate");
    }
    if (num_frames < 1 || num_classes < 1) {
        throw ShapeError("aggregate target must have at least one frame and one class");
    }

    const std::string& video_id = clips.front().video_id;

    // Accumulation order is canonicalized so the result does not depend on
    // the order clips arrive in.
    std::vector<std::size_t> order(clips.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&clips](std::size_t a, std::size_t b) {
        const ClipScores& ca = clips[a];
        const ClipScores& cb = clips[b];
        if (ca.start_frame != cb.start_frame) {
            return ca.start_frame < cb.start_frame;
        }
        if (ca.stride_s != cb.stride_s) {
            return ca.stride_s < cb.stride_s;
        }
        return ca.values < cb.values;
    });

    ScoreMatrix out = ScoreMatrix::zeros(video_id, num_frames, num_classes);
    std::vector<std::int64_t> cover(static_cast<std::size_t>(num_frames), 0);

    for (std::size_t idx : order) {
        const ClipScores& clip = clips[idx];
        if (clip.video_id != video_id) {
            throw ValidationError("clips mix videos '" + video_id + "' and '" + clip.video_id +
                                  "'");
        }
        if (clip.stride_s < 1 || clip.start_frame < 0) {
            throw ValidationError("clip with invalid start or stride in '" + video_id + "'");
        }
        if (clip.values.size() % static_cast<std::size_t>(num_classes) != 0 ||
            clip.values.empty()) {
            throw ShapeError("clip values in '" + video_id + "' not divisible into " +
                             std::to_string(num_classes) + " classes");
        }
        const FrameIndex len = clip.length(num_classes);
        for (FrameIndex k = 0; k < len; ++k) {
            const FrameIndex frame = clip.start_frame + k * clip.stride_s;
            if (frame >= num_frames) {
                throw ValidationError("clip in '" + video_id + "' covers frame " +
                                      std::to_string(frame) + " beyond " +
                                      std::to_string(num_frames));
            }
            for (ClassIndex c = 0; c < num_classes; ++c) {
                const double v = clip.values[static_cast<std::size_t>(k) * num_classes + c];
                if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                    throw DomainError("clip score outside [0,1] in '" + video_id + "'");
                }
                out.at(frame, c) += v;
            }
            cover[static_cast<std::size_t>(frame)] += 1;
        }
    }

    for (FrameIndex f = 0; f < num_frames; ++f) {
        const std::int64_t c = cover[static_cast<std::size_t>(f)];
        if (c == 0) {
            throw CoverageError("frame " + std::to_string(f) + " of '" + video_id +
                                "' is covered by no clip");
        }
        for (ClassIndex cls = 0; cls < num_classes; ++cls) {
            out.at(f, cls) /= static_cast<double>(c);
        }
    }
    return out;
}

}  // namespace spotboost

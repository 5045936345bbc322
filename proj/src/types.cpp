#include "spotboost/types.hpp"

#include <algorithm>
#include <cmath>

namespace spotboost {

ScoreMatrix ScoreMatrix::zeros(std::string video_id, FrameIndex num_frames,
                               ClassIndex num_classes) {
    ScoreMatrix m;
    m.video_id = std::move(video_id);
    m.num_frames = num_frames;
    m.num_classes = num_classes;
    m.values.assign(static_cast<std::size_t>(num_frames) * static_cast<std::size_t>(num_classes),
                    0.0);
    return m;
}

void ScoreMatrix::validate() const {
    if (num_frames < 1 || num_classes < 1) {
        throw ShapeError("score matrix for '" + video_id + "' must have at least one frame and one class");
    }
    if (values.size() != static_cast<std::size_t>(num_frames) * static_cast<std::size_t>(num_classes)) {
        throw ShapeError("score matrix for '" + video_id + "' has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(num_frames * num_classes));
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw DomainError("score matrix for '" + video_id + "' contains a value outside [0,1]");
        }
    }
}

std::int64_t GroundTruth::normalize() {
    std::sort(events.begin(), events.end());
    const auto last = std::unique(events.begin(), events.end());
    const auto dropped = static_cast<std::int64_t>(events.end() - last);
    events.erase(last, events.end());
    return dropped;
}

void GroundTruth::validate() const {
    if (!(fps > 0.0) || !std::isfinite(fps)) {
        throw DomainError("ground truth for '" + video_id + "' has non-positive fps");
    }
    if (num_frames < 1) {
        throw ValidationError("ground truth for '" + video_id + "' has no frames");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.frame < 0 || e.frame >= num_frames) {
            throw ValidationError("ground truth for '" + video_id + "': event frame " +
                                  std::to_string(e.frame) + " outside [0," +
                                  std::to_string(num_frames) + ")");
        }
        if (e.cls < 0) {
            throw ValidationError("ground truth for '" + video_id + "': negative class index");
        }
        if (i > 0 && !(events[i - 1] < e)) {
            throw ValidationError("ground truth for '" + video_id +
                                  "': events not sorted or duplicated");
        }
    }
}

const ScoreMatrix& CandidateModel::scores_for(const std::string& video_id) const {
    const auto it = scores.find(video_id);
    if (it == scores.end()) {
        throw LookupError("candidate '" + id + "' has no scores for video '" + video_id + "'");
    }
    return it->second;
}

void EnsembleSpec::validate() const {
    if (steps.empty()) {
        throw StateError("ensemble spec is empty");
    }
    if (steps.front().weight != 1.0) {
        throw StateError("first ensemble step must have weight 1");
    }
    for (const EnsembleStep& step : steps) {
        if (!(step.weight > 0.0) || step.weight > 1.0) {
            throw DomainError("ensemble step weight " + std::to_string(step.weight) +
                              " outside (0,1]");
        }
    }
}

const CandidateModel& find_candidate(const std::vector<CandidateModel>& pool,
                                     const std::string& candidate_id) {
    for (const CandidateModel& candidate : pool) {
        if (candidate.id == candidate_id) {
            return candidate;
        }
    }
    throw LookupError("no candidate '" + candidate_id + "' in pool");
}

}  // namespace spotboost

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotboost {

using FrameIndex = std::int64_t;
using ClassIndex = std::int32_t;

// Label value for frames that carry no event.
inline constexpr ClassIndex kBackground = -1;

// Error taxonomy for the whole library. Callers can catch the base type or
// a specific category.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error { public: using Error::Error; };       // dimension mismatch
class DomainError : public Error { public: using Error::Error; };      // value outside its domain
class LookupError : public Error { public: using Error::Error; };      // unknown id / missing entry
class StateError : public Error { public: using Error::Error; };       // object not in a usable state
class ValidationError : public Error { public: using Error::Error; };  // input violates an invariant
class FormatError : public Error { public: using Error::Error; };      // malformed file content
class CoverageError : public Error { public: using Error::Error; };    // frames not covered by any clip
class ConfigError : public Error { public: using Error::Error; };      // invalid configuration
class EvalError : public Error { public: using Error::Error; };        // evaluation not defined
class SizeError : public Error { public: using Error::Error; };        // input too short / too small

struct Event {
    FrameIndex frame = 0;
    ClassIndex cls = 0;

    friend bool operator==(const Event&, const Event&) = default;
    friend bool operator<(const Event& a, const Event& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.cls < b.cls;
    }
};

// Dense per-frame x per-class confidence matrix for one video from one
// score source. Values are probabilities in [0,1], stored row-major by frame.
struct ScoreMatrix {
    std::string video_id;
    FrameIndex num_frames = 0;
    ClassIndex num_classes = 0;
    std::vector<double> values;

    static ScoreMatrix zeros(std::string video_id, FrameIndex num_frames, ClassIndex num_classes);

    double at(FrameIndex frame, ClassIndex cls) const {
        return values[static_cast<std::size_t>(frame) * num_classes + cls];
    }
    double& at(FrameIndex frame, ClassIndex cls) {
        return values[static_cast<std::size_t>(frame) * num_classes + cls];
    }

    bool same_shape(const ScoreMatrix& other) const {
        return video_id == other.video_id && num_frames == other.num_frames &&
               num_classes == other.num_classes;
    }

    // Throws ShapeError / DomainError if dimensions or values are invalid.
    void validate() const;
};

// Labeled event instants for one video.
struct GroundTruth {
    std::string video_id;
    double fps = 25.0;
    FrameIndex num_frames = 0;
    std::vector<Event> events;  // sorted by (frame, cls), no exact duplicates

    // Sorts events and drops exact duplicates; returns how many were dropped.
    std::int64_t normalize();

    // Throws if fps, frame ranges, ordering or duplicates are off.
    void validate() const;
};

// An opaque score source plus provenance metadata. Scores map each video id
// to the model's dense per-frame output for that video.
struct CandidateModel {
    std::string id;
    std::string arch_tag;
    std::string optimizer_tag;
    int stride_s = 1;
    int delta = 0;
    std::map<std::string, ScoreMatrix> scores;

    const ScoreMatrix& scores_for(const std::string& video_id) const;
};

struct EnsembleStep {
    std::string candidate_id;
    double weight = 1.0;  // step weight w_t in (0,1]; the first step is fixed to 1

    friend bool operator==(const EnsembleStep&, const EnsembleStep&) = default;
};

// Ordered list of (candidate, step weight) pairs. The ensemble it denotes is
// the left fold of convex combination over the steps.
struct EnsembleSpec {
    std::vector<EnsembleStep> steps;

    // Throws StateError if empty or the first weight is not 1,
    // DomainError if any step weight is outside (0,1].
    void validate() const;
};

struct Spot {
    FrameIndex frame = 0;
    ClassIndex cls = 0;
    double confidence = 0.0;

    friend bool operator==(const Spot&, const Spot&) = default;
};

// Discrete detected events for one video, sorted by (cls, frame).
struct SpotPrediction {
    std::string video_id;
    std::vector<Spot> spots;
};

const CandidateModel& find_candidate(const std::vector<CandidateModel>& pool,
                                     const std::string& candidate_id);

}  // namespace spotboost

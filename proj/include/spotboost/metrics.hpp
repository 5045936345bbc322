#pragma once

#include <vector>

#include "spotboost/types.hpp"

namespace spotboost {

struct ClassReport {
    ClassIndex cls = 0;
    double ap = 0.0;
    std::int64_t gt_count = 0;
    std::int64_t true_positives = 0;
    std::int64_t false_positives = 0;
};

// Result of a tolerance-based mAP evaluation. `map` is the arithmetic mean of
// the per-class APs over classes that have at least one ground-truth event;
// classes without events appear in `per_class` (their detections are all
// false positives) but do not enter the mean.
struct EvalReport {
    double tolerance_sec = 1.0;
    double map = 0.0;
    std::vector<ClassReport> per_class;  // sorted by class index
};

// Mean average precision at a temporal tolerance.
//
// Per video the tolerance in frames is round(fps * tolerance_sec). Per class,
// detections from all videos are ranked by descending confidence (ties: lower
// video id, then lower frame). Each detection greedily matches the nearest
// not-yet-matched ground-truth event of its class within the tolerance
// (distance ties go to the earlier event frame); matched detections are true
// positives, everything else counts as a false positive. AP is the all-point
// interpolated area under the precision-recall curve.
//
// Throws LookupError for predictions on unknown videos and EvalError when no
// class has any ground-truth event.
EvalReport map_at_tolerance(const std::vector<SpotPrediction>& preds,
                            const std::vector<GroundTruth>& gt, double tolerance_sec);

// Improvement of the candidate ensemble over the previous one.
inline double objective_delta(double candidate_map, double previous_map) {
    return candidate_map - previous_map;
}

// Shared rounding rule for second -> frame conversions (round half up).
FrameIndex tolerance_frames(double fps, double tolerance_sec);

}  // namespace spotboost

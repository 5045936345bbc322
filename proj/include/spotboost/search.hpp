#pragma once

#include <string>
#include <vector>

#include "spotboost/metrics.hpp"
#include "spotboost/postprocess.hpp"
#include "spotboost/types.hpp"

namespace spotboost {

std::vector<double> default_weight_grid();  // {0.1, 0.2, ..., 1.0}

struct SearchConfig {
    std::vector<double> weight_grid = default_weight_grid();
    int max_iters = 20;
    double tolerance_sec = 1.0;
    NmsConfig nms;
    bool allow_reselection = true;  // may a member be picked again in a later step
    double min_improvement = 0.0;   // accept an iteration only if objective > this
    int num_threads = 1;            // parallelism of the per-iteration grid scan

    void validate() const;  // ConfigError on bad grid / iteration count
};

struct IterationRecord {
    int iteration = 0;  // t, 1-based
    std::string candidate_id;
    double weight = 0.0;          // w_t
    double validation_map = 0.0;  // metric of the accepted ensemble F_t
    double objective = 0.0;       // validation_map(F_t) - validation_map(F_{t-1})

    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

enum class StopReason { kNoImprovement, kMaxIters };

struct SearchTrace {
    std::vector<IterationRecord> iterations;  // accepted iterations, in order
    StopReason stop_reason = StopReason::kNoImprovement;
};

struct SearchResult {
    EnsembleSpec spec;
    SearchTrace trace;
};

// The greedy boosted-ensembling loop. Iteration 1 picks the single candidate
// with the best validation metric. Each later iteration scans every
// (candidate, weight) pair on the grid, evaluates the convex update through
// NMS and mAP on the validation split, and accepts the pair with the largest
// improvement -- stopping when no pair improves by more than min_improvement
// or when max_iters is reached. Ties break toward the lower candidate index
// in pool order, then the lower weight, so results are deterministic
// regardless of num_threads.
SearchResult run_greedy_search(const std::vector<CandidateModel>& pool,
                     const std::vector<GroundTruth>& valid_gt, const SearchConfig& cfg);

// realize -> temporal_nms per video -> map_at_tolerance.
EvalReport evaluate_ensemble(const EnsembleSpec& spec, const std::vector<CandidateModel>& pool,
                             const std::vector<GroundTruth>& gt, double tolerance_sec,
                             const NmsConfig& nms);

}  // namespace spotboost

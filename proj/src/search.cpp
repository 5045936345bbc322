#include "spotboost/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include "spotboost/ensemble.hpp"

namespace spotboost {

std::vector<double> default_weight_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    return grid;
}

void SearchConfig::validate() const {
    if (weight_grid.empty()) {
        throw ConfigError("weight grid is empty");
    }
    for (std::size_t i = 0; i < weight_grid.size(); ++i) {
        const double w = weight_grid[i];
        if (!(w > 0.0) || w > 1.0) {
            throw ConfigError("weight grid value " + std::to_string(w) + " outside (0,1]");
        }
        if (i > 0 && !(weight_grid[i - 1] < w)) {
            throw ConfigError("weight grid must be strictly increasing");
        }
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be >= 1");
    }
    if (!(tolerance_sec > 0.0)) {
        throw ConfigError("tolerance must be positive");
    }
    if (!(min_improvement >= 0.0) || !std::isfinite(min_improvement)) {
        throw ConfigError("min_improvement must be finite and >= 0");
    }
    if (num_threads < 1) {
        throw ConfigError("num_threads must be >= 1");
    }
    nms.validate();
}

namespace {

// Runs fn(i) for i in [0, n) on up to num_threads workers. Work items are
// striped statically, so each index runs exactly once and results written by
// index are identical for any thread count. The first worker exception is
// rethrown on the calling thread.
void parallel_for(std::size_t n, int num_threads, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<int>(num_threads, static_cast<int>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        threads.emplace_back([&, t] {
            try {
                for (std::size_t i = static_cast<std::size_t>(t); i < n;
                     i += static_cast<std::size_t>(workers)) {
                    fn(i);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : threads) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double evaluate_dense(const std::vector<ScoreMatrix>& dense, const std::vector<GroundTruth>& gt,
                      const SearchConfig& cfg) {
    std::vector<SpotPrediction> preds;
    preds.reserve(dense.size());
    for (const ScoreMatrix& m : dense) {
        preds.push_back(temporal_nms(m, cfg.nms));
    }
    return map_at_tolerance(preds, gt, cfg.tolerance_sec).map;
}

}  // namespace

SearchResult run_greedy_search(const std::vector<CandidateModel>& pool,
                     const std::vector<GroundTruth>& valid_gt, const SearchConfig& cfg) {
    cfg.validate();
    if (pool.empty()) {
        throw ConfigError("candidate pool is empty");
    }
    std::set<std::string> pool_ids;
    for (const CandidateModel& candidate : pool) {
        if (!pool_ids.insert(candidate.id).second) {
            throw ValidationError("candidate id '" + candidate.id + "' appears twice in the pool");
        }
    }
    if (valid_gt.empty()) {
        throw ConfigError("validation split is empty");
    }
    bool any_event = false;
    for (const GroundTruth& gt : valid_gt) {
        gt.validate();
        any_event = any_event || !gt.events.empty();
        for (const CandidateModel& candidate : pool) {
            candidate.scores_for(gt.video_id);  // throws LookupError if missing
        }
    }
    if (!any_event) {
        throw EvalError("validation split has no ground-truth events");
    }

    SearchResult result;

    // Iteration 1: the best single candidate becomes F_1.
    std::vector<double> solo_map(pool.size());
    parallel_for(pool.size(), cfg.num_threads, [&](std::size_t ci) {
        std::vector<ScoreMatrix> dense;
        dense.reserve(valid_gt.size());
        for (const GroundTruth& gt : valid_gt) {
            dense.push_back(pool[ci].scores_for(gt.video_id));
        }
        solo_map[ci] = evaluate_dense(dense, valid_gt, cfg);
    });
    std::size_t first = 0;
    for (std::size_t ci = 1; ci < pool.size(); ++ci) {
        if (solo_map[ci] > solo_map[first]) {
            first = ci;
        }
    }

    std::vector<ScoreMatrix> current;
    current.reserve(valid_gt.size());
    for (const GroundTruth& gt : valid_gt) {
        current.push_back(pool[first].scores_for(gt.video_id));
    }
    double current_map = solo_map[first];

    result.spec.steps.push_back(EnsembleStep{pool[first].id, 1.0});
    result.trace.iterations.push_back(
        IterationRecord{1, pool[first].id, 1.0, current_map, objective_delta(current_map, 0.0)});
    result.trace.stop_reason = StopReason::kMaxIters;

    for (int t = 2; t <= cfg.max_iters; ++t) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (candidate, weight) indices
        for (std::size_t ci = 0; ci < pool.size(); ++ci) {
            if (!cfg.allow_reselection) {
                const auto used = [&](const EnsembleStep& s) {
                    return s.candidate_id == pool[ci].id;
                };
                if (std::any_of(result.spec.steps.begin(), result.spec.steps.end(), used)) {
                    continue;
                }
            }
            for (std::size_t wi = 0; wi < cfg.weight_grid.size(); ++wi) {
                pairs.emplace_back(ci, wi);
            }
        }
        if (pairs.empty()) {
            result.trace.stop_reason = StopReason::kNoImprovement;
            break;
        }

        std::vector<double> pair_map(pairs.size());
        parallel_for(pairs.size(), cfg.num_threads, [&](std::size_t p) {
            const auto [ci, wi] = pairs[p];
            std::vector<ScoreMatrix> dense;
            dense.reserve(valid_gt.size());
            for (std::size_t v = 0; v < valid_gt.size(); ++v) {
                dense.push_back(combine(current[v], pool[ci].scores_for(valid_gt[v].video_id),
                                        cfg.weight_grid[wi]));
            }
            pair_map[p] = evaluate_dense(dense, valid_gt, cfg);
        });

        // Pairs are enumerated in (pool order, ascending weight); keeping the
        // first strict maximum realizes the documented tie-break.
        std::size_t best = 0;
        for (std::size_t p = 1; p < pairs.size(); ++p) {
            if (pair_map[p] > pair_map[best]) {
                best = p;
            }
        }
        const double obj = objective_delta(pair_map[best], current_map);
        if (!(obj > cfg.min_improvement)) {
            result.trace.stop_reason = StopReason::kNoImprovement;
            break;
        }

        const auto [ci, wi] = pairs[best];
        const double w = cfg.weight_grid[wi];
        for (std::size_t v = 0; v < valid_gt.size(); ++v) {
            current[v] = combine(current[v], pool[ci].scores_for(valid_gt[v].video_id), w);
        }
        current_map = pair_map[best];
        result.spec.steps.push_back(EnsembleStep{pool[ci].id, w});
        result.trace.iterations.push_back(IterationRecord{t, pool[ci].id, w, current_map, obj});
    }

    return result;
}

EvalReport evaluate_ensemble(const EnsembleSpec& spec, const std::vector<CandidateModel>& pool,
                             const std::vector<GroundTruth>& gt, double tolerance_sec,
                             const NmsConfig& nms) {
    spec.validate();
    nms.validate();
    std::vector<SpotPrediction> preds;
    preds.reserve(gt.size());
    for (const GroundTruth& g : gt) {
        preds.push_back(temporal_nms(realize(spec, pool, g.video_id), nms));
    }
    return map_at_tolerance(preds, gt, tolerance_sec);
}

}  // namespace spotboost

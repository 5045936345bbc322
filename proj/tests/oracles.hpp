#pragma once

// Independent brute-force reference implementations used to check the
// library. These are deliberately naive (linear scans, literal formulas,
// quadratic loops) and must stay decoupled from the code under test: the only
// library pieces the search oracle reuses are the evaluation primitives it is
// *not* checking.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spotboost/ensemble.hpp"
#include "spotboost/metrics.hpp"
#include "spotboost/postprocess.hpp"
#include "spotboost/search.hpp"
#include "spotboost/types.hpp"

namespace oracles {

using spotboost::ClassIndex;
using spotboost::FrameIndex;

// ---------------------------------------------------------------------------
// Average precision, evaluated from the definition.

struct OracleDet {
    std::string video_id;
    FrameIndex frame = 0;
    double confidence = 0.0;
};

inline double oracle_class_ap(std::vector<OracleDet> dets,
                              const std::map<std::string, std::vector<FrameIndex>>& gt_frames,
                              const std::map<std::string, FrameIndex>& tolerance) {
    std::size_t gt_count = 0;
    for (const auto& [vid, frames] : gt_frames) {
        gt_count += frames.size();
    }
    if (gt_count == 0 || dets.empty()) {
        return 0.0;
    }

    // Insertion sort by (confidence desc, video asc, frame asc).
    for (std::size_t i = 1; i < dets.size(); ++i) {
        const OracleDet d = dets[i];
        std::size_t j = i;
        const auto before = [&](const OracleDet& a, const OracleDet& b) {
            if (a.confidence != b.confidence) return a.confidence > b.confidence;
            if (a.video_id != b.video_id) return a.video_id < b.video_id;
            return a.frame < b.frame;
        };
        while (j > 0 && before(d, dets[j - 1])) {
            dets[j] = dets[j - 1];
            --j;
        }
        dets[j] = d;
    }

    std::map<std::string, std::vector<bool>> used;
    for (const auto& [vid, frames] : gt_frames) {
        used[vid] = std::vector<bool>(frames.size(), false);
    }

    std::vector<bool> is_tp(dets.size(), false);
    for (std::size_t k = 0; k < dets.size(); ++k) {
        const OracleDet& det = dets[k];
        const auto it = gt_frames.find(det.video_id);
        if (it == gt_frames.end()) {
            continue;
        }
        const FrameIndex tol = tolerance.at(det.video_id);
        long best = -1;
        FrameIndex best_dist = 0;
        for (std::size_t j = 0; j < it->second.size(); ++j) {
            if (used[det.video_id][j]) {
                continue;
            }
            const FrameIndex dist = std::llabs(it->second[j] - det.frame);
            if (dist > tol) {
                continue;
            }
            if (best < 0 || dist < best_dist) {
                best = static_cast<long>(j);
                best_dist = dist;
            }
        }
        if (best >= 0) {
            used[det.video_id][static_cast<std::size_t>(best)] = true;
            is_tp[k] = true;
        }
    }

    // All-point interpolation straight from the definition: at every rank
    // where a true positive lands, take the best precision at recall >= that
    // rank's recall.
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < dets.size(); ++k) {
        if (!is_tp[k]) {
            continue;
        }
        std::size_t tp_k = 0;
        for (std::size_t j = 0; j <= k; ++j) {
            tp_k += is_tp[j] ? 1 : 0;
        }
        const double recall = static_cast<double>(tp_k) / static_cast<double>(gt_count);
        double best_precision = 0.0;
        for (std::size_t m = k; m < dets.size(); ++m) {
            std::size_t tp_m = 0;
            for (std::size_t j = 0; j <= m; ++j) {
                tp_m += is_tp[j] ? 1 : 0;
            }
            best_precision =
                std::max(best_precision, static_cast<double>(tp_m) / static_cast<double>(m + 1));
        }
        ap += (recall - prev_recall) * best_precision;
        prev_recall = recall;
    }
    return ap;
}

inline double oracle_map(const std::vector<spotboost::SpotPrediction>& preds,
                         const std::vector<spotboost::GroundTruth>& gts, double tolerance_sec) {
    std::map<std::string, FrameIndex> tolerance;
    std::set<ClassIndex> classes;
    for (const auto& gt : gts) {
        tolerance[gt.video_id] =
            static_cast<FrameIndex>(std::floor(gt.fps * tolerance_sec + 0.5));
        for (const auto& e : gt.events) {
            classes.insert(e.cls);
        }
    }

    double ap_sum = 0.0;
    std::size_t scored = 0;
    for (ClassIndex cls : classes) {
        std::map<std::string, std::vector<FrameIndex>> gt_frames;
        for (const auto& gt : gts) {
            std::vector<FrameIndex> frames;
            for (const auto& e : gt.events) {
                if (e.cls == cls) {
                    frames.push_back(e.frame);
                }
            }
            gt_frames[gt.video_id] = frames;
        }
        std::vector<OracleDet> dets;
        for (const auto& pred : preds) {
            for (const auto& spot : pred.spots) {
                if (spot.cls == cls) {
                    dets.push_back(OracleDet{pred.video_id, spot.frame, spot.confidence});
                }
            }
        }
        ap_sum += oracle_class_ap(dets, gt_frames, tolerance);
        ++scored;
    }
    return scored > 0 ? ap_sum / static_cast<double>(scored) : 0.0;
}

// ---------------------------------------------------------------------------
// Temporal NMS by literal repeated argmax over a mutable mask.

inline std::vector<std::pair<FrameIndex, double>> oracle_nms_1d(const std::vector<double>& scores,
                                                                FrameIndex window,
                                                                double threshold) {
    std::vector<bool> alive(scores.size(), true);
    std::vector<std::pair<FrameIndex, double>> spots;
    while (true) {
        long best = -1;
        for (std::size_t f = 0; f < scores.size(); ++f) {
            if (!alive[f] || scores[f] < threshold) {
                continue;
            }
            if (best < 0 || scores[f] > scores[static_cast<std::size_t>(best)]) {
                best = static_cast<long>(f);
            }
        }
        if (best < 0) {
            break;
        }
        spots.emplace_back(static_cast<FrameIndex>(best), scores[static_cast<std::size_t>(best)]);
        for (long f = best - window; f <= best + window; ++f) {
            if (f >= 0 && f < static_cast<long>(scores.size())) {
                alive[static_cast<std::size_t>(f)] = false;
            }
        }
    }
    std::sort(spots.begin(), spots.end());
    return spots;
}

// ---------------------------------------------------------------------------
// Left-fold realization by the literal combination formula.

inline spotboost::ScoreMatrix oracle_realize(const spotboost::EnsembleSpec& spec,
                                             const std::vector<spotboost::CandidateModel>& pool,
                                             const std::string& video_id) {
    spotboost::ScoreMatrix acc =
        spotboost::find_candidate(pool, spec.steps.front().candidate_id).scores_for(video_id);
    for (std::size_t t = 1; t < spec.steps.size(); ++t) {
        const double w = spec.steps[t].weight;
        const spotboost::ScoreMatrix& member =
            spotboost::find_candidate(pool, spec.steps[t].candidate_id).scores_for(video_id);
        for (std::size_t i = 0; i < acc.values.size(); ++i) {
            acc.values[i] = (1.0 - w) * acc.values[i] + w * member.values[i];
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Exhaustive greedy search: enumerate every (candidate, weight) pair at every
// step, evaluate through the library's metric pipeline, and apply the stated
// selection, acceptance and stopping rules. Checks run_greedy_search's control logic.

inline std::vector<std::pair<std::string, double>> oracle_greedy_search(
    const std::vector<spotboost::CandidateModel>& pool,
    const std::vector<spotboost::GroundTruth>& gts, const spotboost::SearchConfig& cfg) {
    const auto evaluate = [&](const std::vector<spotboost::ScoreMatrix>& dense) {
        std::vector<spotboost::SpotPrediction> preds;
        for (const auto& m : dense) {
            preds.push_back(spotboost::temporal_nms(m, cfg.nms));
        }
        return spotboost::map_at_tolerance(preds, gts, cfg.tolerance_sec).map;
    };

    std::vector<std::pair<std::string, double>> chosen;

    // Step 1: best single candidate, lower pool index on ties.
    std::size_t best_c = 0;
    double best_map = -1.0;
    for (std::size_t c = 0; c < pool.size(); ++c) {
        std::vector<spotboost::ScoreMatrix> dense;
        for (const auto& gt : gts) {
            dense.push_back(pool[c].scores_for(gt.video_id));
        }
        const double m = evaluate(dense);
        if (m > best_map) {
            best_map = m;
            best_c = c;
        }
    }
    chosen.emplace_back(pool[best_c].id, 1.0);
    std::vector<spotboost::ScoreMatrix> current;
    for (const auto& gt : gts) {
        current.push_back(pool[best_c].scores_for(gt.video_id));
    }
    double current_map = best_map;

    for (int t = 2; t <= cfg.max_iters; ++t) {
        double step_best_map = -1.0;
        std::size_t step_best_c = 0;
        double step_best_w = 0.0;
        std::vector<spotboost::ScoreMatrix> step_best_dense;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            for (double w : cfg.weight_grid) {
                std::vector<spotboost::ScoreMatrix> dense;
                for (std::size_t v = 0; v < gts.size(); ++v) {
                    dense.push_back(
                        spotboost::combine(current[v],
                                           pool[c].scores_for(gts[v].video_id), w));
                }
                const double m = evaluate(dense);
                if (m > step_best_map) {
                    step_best_map = m;
                    step_best_c = c;
                    step_best_w = w;
                    step_best_dense = dense;
                }
            }
        }
        if (!(step_best_map - current_map > cfg.min_improvement)) {
            break;
        }
        chosen.emplace_back(pool[step_best_c].id, step_best_w);
        current = step_best_dense;
        current_map = step_best_map;
    }
    return chosen;
}

// ---------------------------------------------------------------------------
// Clip aggregation by dense accumulate/count arrays.

inline std::vector<double> oracle_aggregate(const std::vector<spotboost::ClipScores>& clips,
                                            FrameIndex num_frames, ClassIndex num_classes) {
    std::vector<double> sum(static_cast<std::size_t>(num_frames * num_classes), 0.0);
    std::vector<int> count(static_cast<std::size_t>(num_frames), 0);
    for (const auto& clip : clips) {
        const FrameIndex len = clip.length(num_classes);
        for (FrameIndex k = 0; k < len; ++k) {
            const FrameIndex f = clip.start_frame + k * clip.stride_s;
            count[static_cast<std::size_t>(f)] += 1;
            for (ClassIndex c = 0; c < num_classes; ++c) {
                sum[static_cast<std::size_t>(f * num_classes + c)] +=
                    clip.values[static_cast<std::size_t>(k * num_classes + c)];
            }
        }
    }
    for (FrameIndex f = 0; f < num_frames; ++f) {
        for (ClassIndex c = 0; c < num_classes; ++c) {
            sum[static_cast<std::size_t>(f * num_classes + c)] /= count[static_cast<std::size_t>(f)];
        }
    }
    return sum;
}

}  // namespace oracles

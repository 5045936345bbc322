#include "spotboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace spotboost {

FrameIndex tolerance_frames(double fps, double tolerance_sec) {
    return static_cast<FrameIndex>(std::floor(fps * tolerance_sec + 0.5));
}

namespace {

struct Detection {
    std::size_t video = 0;  // index into the gt vector
    FrameIndex frame = 0;
    double confidence = 0.0;
};

// Ranking rule shared with the search: confidence descending, then video id
// ascending, then frame ascending.
bool rank_before(const Detection& a, const Detection& b,
                 const std::vector<GroundTruth>& gts) {
    if (a.confidence != b.confidence) {
        return a.confidence > b.confidence;
    }
    if (gts[a.video].video_id != gts[b.video].video_id) {
        return gts[a.video].video_id < gts[b.video].video_id;
    }
    return a.frame < b.frame;
}

// Area under the monotone precision envelope (all-point interpolation).
double all_point_ap(const std::vector<bool>& is_tp, std::int64_t gt_count) {
    const std::size_t n = is_tp.size();
    if (n == 0 || gt_count == 0) {
        return 0.0;
    }
    std::vector<double> precision(n);
    std::vector<double> recall(n);
    std::int64_t tp = 0;
    for (std::size_t k = 0; k < n; ++k) {
        tp += is_tp[k] ? 1 : 0;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(gt_count);
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        precision[k] = std::max(precision[k], precision[k + 1]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (is_tp[k]) {
            ap += (recall[k] - prev_recall) * precision[k];
            prev_recall = recall[k];
        }
    }
    return ap;
}

}  // namespace

EvalReport map_at_tolerance(const std::vector<SpotPrediction>& preds,
                            const std::vector<GroundTruth>& gt, double tolerance_sec) {
    if (!(tolerance_sec > 0.0)) {
        throw DomainError("tolerance must be positive, got " + std::to_string(tolerance_sec));
    }

    std::map<std::string, std::size_t> video_index;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        gt[i].validate();
        if (!video_index.emplace(gt[i].video_id, i).second) {
            throw ValidationError("duplicate ground truth for video '" + gt[i].video_id + "'");
        }
    }

    std::set<ClassIndex> classes;
    bool any_gt_event = false;
    for (const GroundTruth& g : gt) {
        for (const Event& e : g.events) {
            classes.insert(e.cls);
            any_gt_event = true;
        }
    }
    if (!any_gt_event) {
        throw EvalError("no class has any ground-truth event");
    }

    // Detections bucketed by class; videos resolved up front.
    std::map<ClassIndex, std::vector<Detection>> detections;
    std::set<std::string> seen_pred_videos;
    for (const SpotPrediction& pred : preds) {
        const auto it = video_index.find(pred.video_id);
        if (it == video_index.end()) {
            throw LookupError("predictions reference unknown video '" + pred.video_id + "'");
        }
        if (!seen_pred_videos.insert(pred.video_id).second) {
            throw ValidationError("duplicate predictions for video '" + pred.video_id + "'");
        }
        for (const Spot& spot : pred.spots) {
            if (spot.frame < 0 || spot.frame >= gt[it->second].num_frames) {
                throw ValidationError("prediction frame " + std::to_string(spot.frame) +
                                      " outside video '" + pred.video_id + "'");
            }
            if (!std::isfinite(spot.confidence) || spot.confidence < 0.0 ||
                spot.confidence > 1.0) {
                throw DomainError("prediction confidence outside [0,1] in video '" +
                                  pred.video_id + "'");
            }
            classes.insert(spot.cls);
            detections[spot.cls].push_back(Detection{it->second, spot.frame, spot.confidence});
        }
    }

    std::vector<FrameIndex> tol(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) {
        tol[i] = tolerance_frames(gt[i].fps, tolerance_sec);
    }

    EvalReport report;
    report.tolerance_sec = tolerance_sec;
    double ap_sum = 0.0;
    std::int64_t scored_classes = 0;

    for (ClassIndex cls : classes) {
        // Ground-truth frames of this class, per video, with matched flags.
        std::vector<std::vector<FrameIndex>> gt_frames(gt.size());
        std::vector<std::vector<bool>> matched(gt.size());
        std::int64_t gt_count = 0;
        for (std::size_t v = 0; v < gt.size(); ++v) {
            for (const Event& e : gt[v].events) {
                if (e.cls == cls) {
                    gt_frames[v].push_back(e.frame);
                }
            }
            matched[v].assign(gt_frames[v].size(), false);
            gt_count += static_cast<std::int64_t>(gt_frames[v].size());
        }

        std::vector<Detection> dets;
        if (const auto it = detections.find(cls); it != detections.end()) {
            dets = it->second;
        }
        std::sort(dets.begin(), dets.end(),
                  [&gt](const Detection& a, const Detection& b) { return rank_before(a, b, gt); });

        std::vector<bool> is_tp(dets.size(), false);
        for (std::size_t k = 0; k < dets.size(); ++k) {
            const Detection& det = dets[k];
            const std::vector<FrameIndex>& frames = gt_frames[det.video];
            std::size_t best = frames.size();
            FrameIndex best_dist = 0;
            for (std::size_t j = 0; j < frames.size(); ++j) {
                if (matched[det.video][j]) {
                    continue;
                }
                const FrameIndex dist = std::abs(frames[j] - det.frame);
                if (dist > tol[det.video]) {
                    continue;
                }
                // Nearest event wins; distance ties go to the earlier frame,
                // which is the first seen since frames are sorted.
                if (best == frames.size() || dist < best_dist) {
                    best = j;
                    best_dist = dist;
                }
            }
            if (best != frames.size()) {
                matched[det.video][best] = true;
                is_tp[k] = true;
            }
        }

        ClassReport cr;
        cr.cls = cls;
        cr.gt_count = gt_count;
        for (bool tp : is_tp) {
            (tp ? cr.true_positives : cr.false_positives) += 1;
        }
        if (gt_count > 0) {
            cr.ap = all_point_ap(is_tp, gt_count);
            ap_sum += cr.ap;
            ++scored_classes;
        }
        report.per_class.push_back(cr);
    }

    report.map = scored_classes > 0 ? ap_sum / static_cast<double>(scored_classes) : 0.0;
    return report;
}

}  // namespace spotboost

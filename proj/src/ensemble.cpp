#include "spotboost/ensemble.hpp"

#include <cmath>

namespace spotboost {

ScoreMatrix combine(const ScoreMatrix& prev, const ScoreMatrix& member, double w) {
    if (!prev.same_shape(member)) {
        throw ShapeError("cannot combine '" + prev.video_id + "' (" +
                         std::to_string(prev.num_frames) + "x" + std::to_string(prev.num_classes) +
                         ") with '" + member.video_id + "' (" + std::to_string(member.num_frames) +
                         "x" + std::to_string(member.num_classes) + ")");
    }
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
        throw DomainError("combination weight " + std::to_string(w) + " outside [0,1]");
    }
    if (w == 0.0) {
        return prev;
    }
    if (w == 1.0) {
        return member;
    }
    ScoreMatrix out = prev;
    // prev + w*(member - prev) rather than the textbook (1-w)*prev + w*member:
    // algebraically identical, but stays inside [min, max] under rounding and
    // keeps combine(a, a, w) == a exact.
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = prev.values[i] + w * (member.values[i] - prev.values[i]);
    }
    return out;
}

ScoreMatrix realize(const EnsembleSpec& spec, const std::vector<CandidateModel>& pool,
                    const std::string& video_id) {
    spec.validate();
    ScoreMatrix acc = find_candidate(pool, spec.steps.front().candidate_id).scores_for(video_id);
    for (std::size_t t = 1; t < spec.steps.size(); ++t) {
        const EnsembleStep& step = spec.steps[t];
        acc = combine(acc, find_candidate(pool, step.candidate_id).scores_for(video_id),
                      step.weight);
    }
    return acc;
}

std::vector<std::pair<std::string, double>> effective_weights(const EnsembleSpec& spec) {
    spec.validate();
    const std::size_t n = spec.steps.size();

    // eff_t = w_t * prod_{u > t} (1 - w_u), accumulated right to left.
    std::vector<double> eff(n);
    double suffix = 1.0;
    for (std::size_t t = n; t-- > 0;) {
        eff[t] = spec.steps[t].weight * suffix;
        suffix *= 1.0 - spec.steps[t].weight;
    }

    // Merge re-selected candidates, keeping first-appearance order.
    std::vector<std::pair<std::string, double>> merged;
    for (std::size_t t = 0; t < n; ++t) {
        const std::string& id = spec.steps[t].candidate_id;
        bool found = false;
        for (auto& [merged_id, weight] : merged) {
            if (merged_id == id) {
                weight += eff[t];
                found = true;
                break;
            }
        }
        if (!found) {
            merged.emplace_back(id, eff[t]);
        }
    }
    return merged;
}

}  // namespace spotboost

#pragma once

#include <utility>
#include <vector>

#include "spotboost/types.hpp"

namespace spotboost {

// Convex combination of two score matrices:
//   out(f, c) = (1 - w) * prev(f, c) + w * member(f, c)
// Matrices must share video id and shape; w must lie in [0,1]. w = 0 returns
// prev unchanged and w = 1 returns member unchanged, bit for bit.
ScoreMatrix combine(const ScoreMatrix& prev, const ScoreMatrix& member, double w);

// Materializes the ensemble for one video as the left fold of combine over
// the spec's steps. The first step weight must be 1, so the fold starts from
// the first member's scores.
ScoreMatrix realize(const EnsembleSpec& spec, const std::vector<CandidateModel>& pool,
                    const std::string& video_id);

// Flattens the step weights into each member's net coefficient:
//   eff_t = w_t * prod_{u > t} (1 - w_u)
// Candidates appearing in several steps get their coefficients summed; the
// result keeps first-appearance order and sums to 1.
std::vector<std::pair<std::string, double>> effective_weights(const EnsembleSpec& spec);

}  // namespace spotboost

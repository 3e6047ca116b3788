#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rvseg/losses.hpp"

namespace rvseg {

// Result of picking the positive prediction (or trajectory).
struct Assignment {
  int positive_index = -1;
  double cost = 0.0;
  std::map<std::string, double> per_term_costs;

  bool operator==(const Assignment&) const = default;
};

// Index minimizing the matching cost against the frame's ground truth;
// ties break to the lowest index.
Assignment best_match_frame(std::span<const Prediction> preds,
                            const ReferentTruth& gt,
                            const MatchCostWeights& w);

// Trajectory-level variant: `trajectories` is an N x I grid (one row per
// query, one column per frame); the row cost is the mean over frames.
Assignment best_match_sequence(
    const std::vector<std::vector<Prediction>>& trajectories,
    std::span<const ReferentTruth> gts, const MatchCostWeights& w);

}  // namespace rvseg

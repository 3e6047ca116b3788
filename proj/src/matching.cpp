#include "rvseg/matching.hpp"

#include "rvseg/errors.hpp"

namespace rvseg {

namespace {

std::map<std::string, double> terms_to_map(const MatchCostTerms& t) {
  return {{"cls", t.cls},
          {"box_l1", t.box_l1},
          {"box_giou", t.box_giou},
          {"mask_dice", t.mask_dice},
          {"mask_focal", t.mask_focal}};
}

}  // namespace

Assignment best_match_frame(std::span<const Prediction> preds,
                            const ReferentTruth& gt,
                            const MatchCostWeights& w) {
  if (preds.empty()) throw NoPredictionsError("best_match_frame");
  Assignment best;
  MatchCostTerms best_terms;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const MatchCostTerms t = matching_cost_terms(preds[i], gt, w);
    if (best.positive_index < 0 || t.total < best.cost) {
      best.positive_index = static_cast<int>(i);
      best.cost = t.total;
      best_terms = t;
    }
  }
  best.per_term_costs = terms_to_map(best_terms);
  return best;
}

Assignment best_match_sequence(
    const std::vector<std::vector<Prediction>>& trajectories,
    std::span<const ReferentTruth> gts, const MatchCostWeights& w) {
  if (trajectories.empty()) throw NoPredictionsError("best_match_sequence");
  const std::size_t frames = gts.size();
  if (frames == 0) throw NoPredictionsError("best_match_sequence: no frames");
  for (const auto& row : trajectories)
    if (row.size() != frames)
      throw ShapeMismatchError("best_match_sequence: ragged trajectory grid");

  Assignment best;
  MatchCostTerms best_terms;
  for (std::size_t n = 0; n < trajectories.size(); ++n) {
    MatchCostTerms mean;
    for (std::size_t i = 0; i < frames; ++i) {
      const MatchCostTerms t = matching_cost_terms(trajectories[n][i], gts[i], w);
      mean.cls += t.cls;
      mean.box_l1 += t.box_l1;
      mean.box_giou += t.box_giou;
      mean.mask_dice += t.mask_dice;
      mean.mask_focal += t.mask_focal;
      mean.total += t.total;
    }
    const double inv = 1.0 / static_cast<double>(frames);
    mean.cls *= inv;
    mean.box_l1 *= inv;
    mean.box_giou *= inv;
    mean.mask_dice *= inv;
    mean.mask_focal *= inv;
    mean.total *= inv;
    if (best.positive_index < 0 || mean.total < best.cost) {
      best.positive_index = static_cast<int>(n);
      best.cost = mean.total;
      best_terms = mean;
    }
  }
  best.per_term_costs = terms_to_map(best_terms);
  return best;
}

}  // namespace rvseg

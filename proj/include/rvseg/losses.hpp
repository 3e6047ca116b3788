#pragma once

#include <span>
#include <vector>

#include "rvseg/detector.hpp"
#include "rvseg/geometry.hpp"
#include "rvseg/scenario.hpp"

namespace rvseg {

struct MatchCostWeights {
  double lambda_cls = 2.0;
  double lambda_box = 5.0;
  double lambda_mask = 2.0;
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
  double dice_eps = 1.0;
};

void validate(const MatchCostWeights& w);

// Probabilities off (0,1) after the caller's clamping are a bug, not data.
double focal_loss(double p, bool is_positive, double alpha, double gamma);

double l1_box_loss(const Box& a, const Box& b);
double giou_loss(const Box& a, const Box& b);

// Soft-grid DICE; values must be in [0,1] with the grid matching gt's size.
double dice_loss(std::span<const double> pred, const Mask& gt, double eps);
double dice_loss(const Mask& pred, const Mask& gt, double eps);

// Mean per-pixel focal loss with is_positive taken from the gt bit.
double mask_focal_loss(std::span<const double> pred, const Mask& gt,
                       double alpha, double gamma);
double mask_focal_loss(const Mask& pred, const Mask& gt, double alpha,
                       double gamma);

struct MatchCostTerms {
  double cls = 0.0;
  double box_l1 = 0.0;
  double box_giou = 0.0;
  double mask_dice = 0.0;
  double mask_focal = 0.0;
  double total = 0.0;
};

// The matching objective: lambda_cls * L_cls + lambda_box * (L1 + GIoU) +
// lambda_mask * (DICE + mask focal). An invisible ground truth contributes
// only the classification term with the prediction treated as negative.
MatchCostTerms matching_cost_terms(const Prediction& pred,
                                   const ReferentTruth& gt,
                                   const MatchCostWeights& w);
double matching_cost(const Prediction& pred, const ReferentTruth& gt,
                     const MatchCostWeights& w);

}  // namespace rvseg

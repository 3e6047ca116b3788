#include "rvseg/losses.hpp"

#include <algorithm>
#include <cmath>

#include "rvseg/errors.hpp"

namespace rvseg {

namespace {

constexpr double kProbClamp = 1e-7;

std::vector<double> soft_grid(const Mask& m) {
  std::vector<double> g(m.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = m.bits()[i] ? 1.0 : 0.0;
  return g;
}

}  // namespace

void validate(const MatchCostWeights& w) {
  if (w.lambda_cls < 0.0 || w.lambda_box < 0.0 || w.lambda_mask < 0.0)
    throw ConfigError("loss coefficients must be non-negative");
  if (w.focal_gamma < 0.0) throw ConfigError("focal_gamma must be >= 0");
  if (w.focal_alpha <= 0.0 || w.focal_alpha >= 1.0)
    throw ConfigError("focal_alpha must be in (0,1)");
  if (w.dice_eps <= 0.0) throw ConfigError("dice_eps must be positive");
}

double focal_loss(double p, bool is_positive, double alpha, double gamma) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidProbabilityError("focal_loss requires p in (0,1)");
  if (is_positive) return -alpha * std::pow(1.0 - p, gamma) * std::log(p);
  return -(1.0 - alpha) * std::pow(p, gamma) * std::log(1.0 - p);
}

double l1_box_loss(const Box& a, const Box& b) {
  if (a.is_empty() || b.is_empty()) throw EmptyBoxError("l1_box_loss");
  return std::abs(a.cx - b.cx) + std::abs(a.cy - b.cy) + std::abs(a.w - b.w) +
         std::abs(a.h - b.h);
}

double giou_loss(const Box& a, const Box& b) { return 1.0 - box_giou(a, b); }

double dice_loss(std::span<const double> pred, const Mask& gt, double eps) {
  if (pred.size() != gt.size()) throw ShapeMismatchError("dice_loss");
  if (eps <= 0.0) throw ConfigError("dice eps must be positive");
  double inter = 0.0;
  double psum = 0.0;
  double gsum = 0.0;
  const auto& bits = gt.bits();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += pred[i] * (bits[i] ? 1.0 : 0.0);
    psum += pred[i];
    gsum += bits[i] ? 1.0 : 0.0;
  }
  return 1.0 - (2.0 * inter + eps) / (psum + gsum + eps);
}

double dice_loss(const Mask& pred, const Mask& gt, double eps) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw ShapeMismatchError("dice_loss");
  return dice_loss(soft_grid(pred), gt, eps);
}

double mask_focal_loss(std::span<const double> pred, const Mask& gt,
                       double alpha, double gamma) {
  if (pred.size() != gt.size()) throw ShapeMismatchError("mask_focal_loss");
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  const auto& bits = gt.bits();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kProbClamp, 1.0 - kProbClamp);
    sum += focal_loss(p, bits[i] != 0, alpha, gamma);
  }
  return sum / static_cast<double>(pred.size());
}

double mask_focal_loss(const Mask& pred, const Mask& gt, double alpha,
                       double gamma) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw ShapeMismatchError("mask_focal_loss");
  return mask_focal_loss(soft_grid(pred), gt, alpha, gamma);
}

MatchCostTerms matching_cost_terms(const Prediction& pred,
                                   const ReferentTruth& gt,
                                   const MatchCostWeights& w) {
  validate(w);
  MatchCostTerms t;
  const double p = std::clamp(pred.score, kProbClamp, 1.0 - kProbClamp);
  if (!gt.visible) {
    // No regression target exists for an absent referent; only the
    // classification term applies, with the prediction as a negative.
    t.cls = focal_loss(p, false, w.focal_alpha, w.focal_gamma);
    t.total = w.lambda_cls * t.cls;
    return t;
  }
  t.cls = focal_loss(p, true, w.focal_alpha, w.focal_gamma);
  t.box_l1 = l1_box_loss(pred.box, gt.box);
  t.box_giou = giou_loss(pred.box, gt.box);
  t.mask_dice = dice_loss(pred.mask, gt.mask, w.dice_eps);
  t.mask_focal = mask_focal_loss(pred.mask, gt.mask, w.focal_alpha, w.focal_gamma);
  t.total = w.lambda_cls * t.cls + w.lambda_box * (t.box_l1 + t.box_giou) +
            w.lambda_mask * (t.mask_dice + t.mask_focal);
  return t;
}

double matching_cost(const Prediction& pred, const ReferentTruth& gt,
                     const MatchCostWeights& w) {
  return matching_cost_terms(pred, gt, w).total;
}

}  // namespace rvseg

#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rvseg/geometry.hpp"

namespace rvseg {

// Region similarity J: mask IoU with the empty-vs-empty = 1 convention.
double region_similarity(const Mask& pred, const Mask& gt);

// Boundary F-measure: 4-connected boundary pixel sets matched under a
// Chebyshev pixel tolerance; F = 2PR/(P+R), 1 when both boundaries are
// empty, 0 when only one is.
double boundary_f(const Mask& pred, const Mask& gt, int tolerance_px);

// DAVIS-style default: ceil(0.008 * image diagonal), at least 1.
int default_boundary_tolerance(int width, int height);

struct Aggregates {
  double overall_iou = 0.0;
  double mean_iou = 0.0;
  std::map<double, double> precision_at;  // K in {0.5,...,0.9}, strict >
};

Aggregates dataset_aggregates(std::span<const std::pair<Mask, Mask>> samples);

struct MetricsReport {
  double j_mean = 0.0;
  double f_mean = 0.0;
  double jf_mean = 0.0;
  std::vector<double> per_frame_j;
  std::vector<double> per_frame_f;
  double overall_iou = 0.0;
  double mean_iou = 0.0;
  std::map<double, double> precision_at;
};

// Full metric stack over aligned (prediction, ground-truth) mask sequences.
MetricsReport evaluate_masks(std::span<const Mask> pred, std::span<const Mask> gt,
                             int tolerance_px);

}  // namespace rvseg

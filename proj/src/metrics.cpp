#include "rvseg/metrics.hpp"

#include <cmath>

#include "rvseg/errors.hpp"

namespace rvseg {

namespace {

// 4-connected boundary: a set pixel with a 4-neighbor outside the mask or
// outside the image.
Mask boundary_of(const Mask& m) {
  Mask b(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == m.width() - 1 ||
                        y == m.height() - 1 || !m.at(x - 1, y) ||
                        !m.at(x + 1, y) || !m.at(x, y - 1) || !m.at(x, y + 1);
      if (edge) b.set(x, y, true);
    }
  }
  return b;
}

// Fraction of `from` boundary pixels within tolerance of the `to` boundary.
double matched_fraction(const Mask& from, const Mask& to, int tol) {
  const int total = from.popcount();
  if (total == 0) return 0.0;
  const Mask reach = mask_dilate(to, tol);
  int hit = 0;
  for (int y = 0; y < from.height(); ++y)
    for (int x = 0; x < from.width(); ++x)
      if (from.at(x, y) && reach.at(x, y)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(total);
}

const std::vector<double>& precision_thresholds() {
  static const std::vector<double> ks = {0.5, 0.6, 0.7, 0.8, 0.9};
  return ks;
}

}  // namespace

double region_similarity(const Mask& pred, const Mask& gt) {
  return mask_iou(pred, gt);
}

double boundary_f(const Mask& pred, const Mask& gt, int tolerance_px) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw ShapeMismatchError("boundary_f");
  if (tolerance_px < 0) throw ConfigError("boundary tolerance must be >= 0");
  const Mask bp = boundary_of(pred);
  const Mask bg = boundary_of(gt);
  const bool p_empty = bp.empty();
  const bool g_empty = bg.empty();
  if (p_empty && g_empty) return 1.0;
  if (p_empty || g_empty) return 0.0;
  const double precision = matched_fraction(bp, bg, tolerance_px);
  const double recall = matched_fraction(bg, bp, tolerance_px);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

int default_boundary_tolerance(int width, int height) {
  const double diag = std::sqrt(static_cast<double>(width) * width +
                                static_cast<double>(height) * height);
  const int tol = static_cast<int>(std::ceil(0.008 * diag));
  return tol < 1 ? 1 : tol;
}

Aggregates dataset_aggregates(std::span<const std::pair<Mask, Mask>> samples) {
  if (samples.empty()) throw NoSamplesError("dataset_aggregates");
  Aggregates agg;
  long long total_inter = 0;
  long long total_union = 0;
  double iou_sum = 0.0;
  std::vector<double> ious;
  ious.reserve(samples.size());
  for (const auto& [pred, gt] : samples) {
    if (pred.width() != gt.width() || pred.height() != gt.height())
      throw ShapeMismatchError("dataset_aggregates");
    int inter = 0;
    int uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      inter += pred.bits()[i] & gt.bits()[i];
      uni += pred.bits()[i] | gt.bits()[i];
    }
    total_inter += inter;
    total_union += uni;
    const double iou = mask_iou(pred, gt);
    iou_sum += iou;
    ious.push_back(iou);
  }
  agg.overall_iou = total_union > 0
                        ? static_cast<double>(total_inter) /
                              static_cast<double>(total_union)
                        : 1.0;
  agg.mean_iou = iou_sum / static_cast<double>(samples.size());
  for (double k : precision_thresholds()) {
    int above = 0;
    for (double iou : ious)
      if (iou > k) ++above;  // strict ">": "higher than a threshold"
    agg.precision_at[k] = static_cast<double>(above) /
                          static_cast<double>(samples.size());
  }
  return agg;
}

MetricsReport evaluate_masks(std::span<const Mask> pred, std::span<const Mask> gt,
                             int tolerance_px) {
  if (pred.size() != gt.size())
    throw ShapeMismatchError("evaluate_masks: sequence lengths differ");
  if (pred.empty()) throw NoSamplesError("evaluate_masks");
  MetricsReport report;
  std::vector<std::pair<Mask, Mask>> samples;
  samples.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    report.per_frame_j.push_back(region_similarity(pred[i], gt[i]));
    report.per_frame_f.push_back(boundary_f(pred[i], gt[i], tolerance_px));
    samples.emplace_back(pred[i], gt[i]);
  }
  double js = 0.0;
  double fs = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    js += report.per_frame_j[i];
    fs += report.per_frame_f[i];
  }
  report.j_mean = js / static_cast<double>(pred.size());
  report.f_mean = fs / static_cast<double>(pred.size());
  report.jf_mean = (report.j_mean + report.f_mean) / 2.0;
  const Aggregates agg = dataset_aggregates(samples);
  report.overall_iou = agg.overall_iou;
  report.mean_iou = agg.mean_iou;
  report.precision_at = agg.precision_at;
  return report;
}

}  // namespace rvseg

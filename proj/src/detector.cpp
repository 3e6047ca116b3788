#include "rvseg/detector.hpp"

#include <algorithm>
#include <cmath>

#include "rvseg/errors.hpp"
#include "rvseg/rng.hpp"

namespace rvseg {

namespace {

// Calibration of the synthetic detector. The two affinity channels mirror
// the real pipeline: the expression channel is always on (cross-modal
// features), the content channel only pays off once a query carries the
// target's semantics, which is what propagation delivers.
constexpr double kTextWeight = 0.8;
constexpr double kContentWeight = 0.7;
// Below this utility a query detects nothing and emits an empty mask.
constexpr double kDetectFloor = 0.35;
constexpr double kScoreCenter = 0.45;
// Magnitude of the relative box perturbation when the spatial prior is
// useless; scaled down as IoU(base box, true box) grows.
constexpr double kPriorErrScale = 0.15;
// Extra perturbation per additional query locked onto the same object.
constexpr double kDupErrScale = 0.008;
// Non-canonical position embeddings restrict attention to the decoded box
// dilated by this factor, and localization is dragged toward that field.
constexpr double kSupportDilation = 2.0;
constexpr double kGatedDrag = 0.35;
constexpr double kNoiseClampSigmas = 3.0;

constexpr std::uint64_t kTagConfusion = 0x434f4e46ULL;  // "CONF"
constexpr std::uint64_t kTagDirection = 0x44495245ULL;  // "DIRE"
constexpr std::uint64_t kTagNoise = 0x4e4f4953ULL;      // "NOIS"
constexpr std::uint64_t kTagMorph = 0x4d525048ULL;      // "MRPH"

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool center_in_support(const Box& support, const Box& object) {
  const double half_w = support.w * kSupportDilation / 2.0;
  const double half_h = support.h * kSupportDilation / 2.0;
  return std::abs(object.cx - support.cx) <= half_w &&
         std::abs(object.cy - support.cy) <= half_h;
}

}  // namespace

void validate(const OracleParams& params) {
  if (params.score_sharpness <= 0.0)
    throw ConfigError("score_sharpness must be positive");
  if (params.prior_gain < 0.0 || params.prior_gain > 1.0)
    throw ConfigError("prior_gain must be in [0,1]");
  if (params.box_noise_sigma < 0.0)
    throw ConfigError("box_noise_sigma must be non-negative");
  if (params.distractor_confusion < 0.0 || params.distractor_confusion > 1.0)
    throw ConfigError("distractor_confusion must be in [0,1]");
}

SyntheticOracle::SyntheticOracle(OracleParams params,
                                 std::vector<double> expression_embedding)
    : params_(params), expression_(std::move(expression_embedding)) {
  validate(params_);
}

std::vector<Prediction> SyntheticOracle::detect(
    const FrameView& frame, std::span<const QueryState> queries) const {
  if (queries.empty()) throw NoPredictionsError("detect with no queries");
  const std::uint64_t fkey =
      hash_key({params_.seed, static_cast<std::uint64_t>(frame.frame_index)});

  struct Choice {
    int object = -1;  // index into frame.objects, -1 when nothing seen
    double utility = 0.0;
  };
  std::vector<Choice> choices(queries.size());

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryState& q = queries[qi];
    const std::uint64_t qkey = hash_combine(fkey, hash_doubles(q.content));
    const bool gated = !position_is_canonical(q.position);
    const Box support = gated ? position_to_box(q.position) : Box{};
    Choice best;
    best.utility = -1e100;
    for (std::size_t oi = 0; oi < frame.objects.size(); ++oi) {
      const ObjectView& obj = frame.objects[oi];
      if (gated && !center_in_support(support, obj.box)) continue;
      Rng noise(hash_key({qkey, kTagConfusion, static_cast<std::uint64_t>(oi)}));
      const double u = kTextWeight * dot(expression_, obj.identity) +
                       kContentWeight * dot(q.content, obj.identity) -
                       params_.distractor_confusion * noise.uniform();
      if (u > best.utility + 1e-15) {
        best.utility = u;
        best.object = static_cast<int>(oi);
      }
    }
    if (best.object < 0) best.utility = 0.0;
    if (best.utility < kDetectFloor) best.object = -1;
    choices[qi] = best;
  }

  // Queries competing for the same object degrade each other's readout.
  std::vector<int> claims(frame.objects.size(), 0);
  for (const Choice& c : choices)
    if (c.object >= 0) ++claims[static_cast<std::size_t>(c.object)];

  std::vector<Prediction> preds(queries.size());
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryState& q = queries[qi];
    const Choice& c = choices[qi];
    const std::uint64_t qkey = hash_combine(fkey, hash_doubles(q.content));
    Prediction p;
    p.score = logistic(params_.score_sharpness * (c.utility - kScoreCenter));
    p.position_passthrough = q.position;
    if (c.object < 0) {
      // Nothing seen: keep the spatial prior as the box, report no mask,
      // and pass the content through so the query is not destroyed.
      p.box = q.base_box;
      p.mask = Mask(frame.width, frame.height);
      p.output_embedding = q.content;
      preds[qi] = std::move(p);
      continue;
    }
    const ObjectView& obj = frame.objects[static_cast<std::size_t>(c.object)];
    const double prior_iou = box_iou(q.base_box, obj.box);
    const int dup = claims[static_cast<std::size_t>(c.object)] - 1;
    const double mag =
        params_.prior_gain * ((1.0 - prior_iou) * kPriorErrScale +
                              kDupErrScale * static_cast<double>(dup));

    Rng dir_rng(hash_key({qkey, kTagDirection}));
    double dir[4];
    double n2 = 0.0;
    for (double& d : dir) {
      d = dir_rng.gaussian();
      n2 += d * d;
    }
    const double inv = 1.0 / std::sqrt(n2 > 0 ? n2 : 1.0);
    Rng noise_rng(hash_key({qkey, kTagNoise}));
    double err4[4];
    for (int i = 0; i < 4; ++i) {
      double n = noise_rng.gaussian() * params_.box_noise_sigma;
      const double lim = kNoiseClampSigmas * params_.box_noise_sigma;
      n = std::clamp(n, -lim, lim);
      err4[i] = dir[i] * inv * mag + n;
    }
    // Relative perturbation keeps errors proportional to object size.
    Box emitted;
    emitted.cx = obj.box.cx + err4[0] * obj.box.w;
    emitted.cy = obj.box.cy + err4[1] * obj.box.h;
    emitted.w = obj.box.w * (1.0 + err4[2]);
    emitted.h = obj.box.h * (1.0 + err4[3]);
    if (!position_is_canonical(q.position)) {
      // A rewritten position embedding pins the attention field to the
      // previous box; localization lags toward it.
      const Box support = position_to_box(q.position);
      emitted.cx = (1.0 - kGatedDrag) * emitted.cx + kGatedDrag * support.cx;
      emitted.cy = (1.0 - kGatedDrag) * emitted.cy + kGatedDrag * support.cy;
      emitted.w = (1.0 - kGatedDrag) * emitted.w + kGatedDrag * support.w;
      emitted.h = (1.0 - kGatedDrag) * emitted.h + kGatedDrag * support.h;
    }
    emitted.cx = std::clamp(emitted.cx, 0.0, 1.0);
    emitted.cy = std::clamp(emitted.cy, 0.0, 1.0);
    emitted.w = std::clamp(emitted.w, 1e-4, 1.0);
    emitted.h = std::clamp(emitted.h, 1e-4, 1.0);
    p.box = emitted;

    const double err = std::abs(emitted.cx - obj.box.cx) +
                       std::abs(emitted.cy - obj.box.cy) +
                       std::abs(emitted.w - obj.box.w) +
                       std::abs(emitted.h - obj.box.h);
    const int min_side = std::min(frame.width, frame.height);
    int radius = static_cast<int>(std::llround(err * min_side));
    radius = std::min(radius, min_side / 3);
    Rng morph_rng(hash_key({qkey, kTagMorph}));
    const bool grow = (morph_rng.next_u64() & 1) != 0;
    p.mask = grow ? mask_dilate(obj.mask, radius) : mask_erode(obj.mask, radius);
    p.output_embedding = obj.identity;
    preds[qi] = std::move(p);
  }
  return preds;
}

}  // namespace rvseg

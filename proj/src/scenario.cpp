#include "rvseg/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "rvseg/errors.hpp"
#include "rvseg/rng.hpp"

namespace rvseg {

namespace {

constexpr std::uint64_t kTagIdentity = 0x49444e54ULL;  // "IDNT"
constexpr std::uint64_t kTagSuite = 0x53554954ULL;     // "SUIT"

const ObjectScript* find_object(const ScenarioSpec& spec, int id) {
  for (const auto& o : spec.objects)
    if (o.id == id) return &o;
  return nullptr;
}

bool visible_at(const ObjectScript& o, int frame) {
  for (const auto& iv : o.visible)
    if (frame >= iv.begin && frame < iv.end) return true;
  return false;
}

Keyframe interpolate(const std::vector<Keyframe>& kfs, int frame) {
  if (frame <= kfs.front().frame) return kfs.front();
  if (frame >= kfs.back().frame) return kfs.back();
  for (std::size_t i = 1; i < kfs.size(); ++i) {
    if (frame > kfs[i].frame) continue;
    const Keyframe& a = kfs[i - 1];
    const Keyframe& b = kfs[i];
    const double t =
        static_cast<double>(frame - a.frame) / static_cast<double>(b.frame - a.frame);
    Keyframe out;
    out.frame = frame;
    out.cx = a.cx + (b.cx - a.cx) * t;
    out.cy = a.cy + (b.cy - a.cy) * t;
    out.w = a.w + (b.w - a.w) * t;
    out.h = a.h + (b.h - a.h) * t;
    return out;
  }
  return kfs.back();
}

// Pixel-center rasterization with half-open extents for rectangles; this
// keeps mask bits free of floating rounding ambiguity at shared edges.
Mask rasterize(ShapeKind shape, const Keyframe& k, int width, int height) {
  Mask m(width, height);
  const double x0 = k.cx - k.w / 2.0;
  const double x1 = k.cx + k.w / 2.0;
  const double y0 = k.cy - k.h / 2.0;
  const double y1 = k.cy + k.h / 2.0;
  const int px0 = std::max(0, static_cast<int>(std::floor(x0 - 0.5)));
  const int px1 = std::min(width - 1, static_cast<int>(std::ceil(x1)));
  const int py0 = std::max(0, static_cast<int>(std::floor(y0 - 0.5)));
  const int py1 = std::min(height - 1, static_cast<int>(std::ceil(y1)));
  for (int y = py0; y <= py1; ++y) {
    for (int x = px0; x <= px1; ++x) {
      const double cx = x + 0.5;
      const double cy = y + 0.5;
      bool in = false;
      if (shape == ShapeKind::Rectangle) {
        in = cx >= x0 && cx < x1 && cy >= y0 && cy < y1;
      } else {
        const double dx = (cx - k.cx) / (k.w / 2.0);
        const double dy = (cy - k.cy) / (k.h / 2.0);
        in = dx * dx + dy * dy <= 1.0;
      }
      if (in) m.set(x, y, true);
    }
  }
  return m;
}

// Unit vector with an exact cosine against `base`.
std::vector<double> vector_with_cosine(const std::vector<double>& base,
                                       double cosine, Rng& rng) {
  const int d = static_cast<int>(base.size());
  std::vector<double> raw = rng.unit_vector(d);
  // Orthogonalize against base.
  const double proj = dot(raw, base);
  double n2 = 0.0;
  for (int i = 0; i < d; ++i) {
    raw[static_cast<std::size_t>(i)] -= proj * base[static_cast<std::size_t>(i)];
    n2 += raw[static_cast<std::size_t>(i)] * raw[static_cast<std::size_t>(i)];
  }
  const double inv = 1.0 / std::sqrt(n2 > 0 ? n2 : 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    out[static_cast<std::size_t>(i)] = cosine * base[static_cast<std::size_t>(i)] +
                                       s * raw[static_cast<std::size_t>(i)] * inv;
  return out;
}

std::vector<std::vector<double>> resolve_identities(const ScenarioSpec& spec) {
  std::vector<std::vector<double>> out(spec.objects.size());
  std::vector<bool> done(spec.objects.size(), false);
  // Seeded and explicit identities first, then "near" references.
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const auto& o = spec.objects[i];
    if (o.identity.mode == IdentitySpec::Mode::Seeded) {
      Rng rng(hash_key({spec.seed, kTagIdentity, static_cast<std::uint64_t>(o.id)}));
      out[i] = rng.unit_vector(spec.embed_dim);
      done[i] = true;
    } else if (o.identity.mode == IdentitySpec::Mode::Explicit) {
      if (static_cast<int>(o.identity.values.size()) != spec.embed_dim)
        throw BadScriptError("explicit identity dimension mismatch");
      out[i] = o.identity.values;
      done[i] = true;
    }
  }
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const auto& o = spec.objects[i];
    if (o.identity.mode != IdentitySpec::Mode::Near) continue;
    std::size_t ref_idx = spec.objects.size();
    for (std::size_t j = 0; j < spec.objects.size(); ++j)
      if (spec.objects[j].id == o.identity.of_id) ref_idx = j;
    if (ref_idx == spec.objects.size() || !done[ref_idx])
      throw BadScriptError("near identity references an unresolved object");
    Rng rng(hash_key({spec.seed, kTagIdentity, static_cast<std::uint64_t>(o.id), 7}));
    out[i] = vector_with_cosine(out[ref_idx], o.identity.cosine, rng);
    done[i] = true;
  }
  return out;
}

}  // namespace

const ObjectTruth& FrameTruth::referent() const {
  for (const auto& o : objects)
    if (o.id == referent_id) return o;
  throw BadScriptError("referent object missing from frame truth");
}

void validate(const ScenarioSpec& spec) {
  if (spec.width < 4 || spec.height < 4)
    throw BadScriptError("image size must be at least 4x4");
  if (spec.num_frames < 1) throw BadScriptError("num_frames must be >= 1");
  if (spec.embed_dim < 8) throw BadScriptError("embed_dim must be >= 8");
  if (spec.objects.empty()) throw BadScriptError("no objects scripted");
  if (find_object(spec, spec.referent_id) == nullptr)
    throw BadScriptError("referent_id names no scripted object");
  for (const auto& o : spec.objects) {
    if (o.keyframes.empty()) throw BadScriptError("object has no keyframes");
    for (std::size_t i = 0; i < o.keyframes.size(); ++i) {
      if (o.keyframes[i].w <= 0.0 || o.keyframes[i].h <= 0.0)
        throw BadScriptError("keyframe size must be positive");
      if (i > 0 && o.keyframes[i].frame <= o.keyframes[i - 1].frame)
        throw BadScriptError("keyframes must be strictly increasing in frame");
    }
    for (std::size_t i = 0; i < o.visible.size(); ++i) {
      if (o.visible[i].begin >= o.visible[i].end)
        throw BadScriptError("empty visibility interval");
      if (i > 0 && o.visible[i].begin < o.visible[i - 1].end)
        throw BadScriptError("visibility intervals must be disjoint and sorted");
    }
    if (o.identity.mode == IdentitySpec::Mode::Near &&
        (o.identity.cosine < -1.0 || o.identity.cosine > 1.0))
      throw BadScriptError("identity cosine out of [-1,1]");
  }
  for (std::size_t i = 0; i < spec.objects.size(); ++i)
    for (std::size_t j = i + 1; j < spec.objects.size(); ++j)
      if (spec.objects[i].id == spec.objects[j].id)
        throw BadScriptError("duplicate object id");
}

std::vector<FrameTruth> generate(const ScenarioSpec& spec) {
  validate(spec);
  const auto identities = resolve_identities(spec);
  std::vector<FrameTruth> frames;
  frames.reserve(static_cast<std::size_t>(spec.num_frames));
  for (int t = 0; t < spec.num_frames; ++t) {
    FrameTruth ft;
    ft.frame_index = t;
    ft.width = spec.width;
    ft.height = spec.height;
    ft.referent_id = spec.referent_id;
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const auto& o = spec.objects[i];
      ObjectTruth obj;
      obj.id = o.id;
      obj.identity = identities[i];
      if (visible_at(o, t)) {
        const Keyframe k = interpolate(o.keyframes, t);
        obj.mask = rasterize(o.shape, k, spec.width, spec.height);
        // Scripted-visible but rasterizing to nothing (off-frame or
        // sub-pixel) counts as not visible.
        if (!obj.mask.empty()) {
          obj.visible = true;
          obj.box = mask_tight_box(obj.mask);
        } else {
          obj.mask = Mask(spec.width, spec.height);
        }
      } else {
        obj.mask = Mask(spec.width, spec.height);
      }
      if (obj.id == spec.referent_id) ft.referent_visible = obj.visible;
      ft.objects.push_back(std::move(obj));
    }
    frames.push_back(std::move(ft));
  }
  return frames;
}

ReferentTruth referent_truth(const FrameTruth& truth) {
  const ObjectTruth& r = truth.referent();
  return ReferentTruth{r.visible, r.box, r.mask};
}

FrameView frame_view(const FrameTruth& truth) {
  FrameView view;
  view.frame_index = truth.frame_index;
  view.width = truth.width;
  view.height = truth.height;
  for (const auto& o : truth.objects) {
    if (!o.visible) continue;
    view.objects.push_back(ObjectView{o.box, o.mask, o.identity});
  }
  return view;
}

std::vector<double> expression_embedding(const ScenarioSpec& spec) {
  validate(spec);
  const auto identities = resolve_identities(spec);
  for (std::size_t i = 0; i < spec.objects.size(); ++i)
    if (spec.objects[i].id == spec.referent_id) return identities[i];
  throw BadScriptError("referent_id names no scripted object");
}

std::vector<std::string> builtin_suite_names() {
  return {"occlusion", "entrance", "distractors", "scale-change"};
}

namespace {

ObjectScript moving_object(int id, ShapeKind shape, double x0, double y0,
                           double x1, double y1, double w, double h,
                           int num_frames) {
  ObjectScript o;
  o.id = id;
  o.shape = shape;
  o.keyframes = {Keyframe{0, x0, y0, w, h},
                 Keyframe{num_frames - 1, x1, y1, w, h}};
  o.visible = {FrameInterval{0, num_frames}};
  return o;
}

ScenarioSpec occlusion_scenario(std::uint64_t seed, Rng& rng) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.num_frames = 16;
  const double y = 24.0 + rng.uniform(-4.0, 4.0);
  const double w = 13.0 + rng.uniform(-2.0, 2.0);
  const double h = 11.0 + rng.uniform(-2.0, 2.0);
  ObjectScript ref = moving_object(0, ShapeKind::Ellipse, 9.0 + rng.uniform(-2.0, 2.0),
                                   y, 39.0 + rng.uniform(-2.0, 2.0),
                                   y + rng.uniform(-2.0, 2.0), w, h, spec.num_frames);
  const int hide_start = rng.uniform_int(5, 7);
  const int hide_len = rng.uniform_int(3, 4);
  ref.visible = {FrameInterval{0, hide_start},
                 FrameInterval{hide_start + hide_len, spec.num_frames}};
  spec.objects.push_back(ref);
  spec.objects.push_back(moving_object(
      1, ShapeKind::Rectangle, 36.0 + rng.uniform(-2.0, 2.0),
      9.0 + rng.uniform(-2.0, 2.0), 12.0 + rng.uniform(-2.0, 2.0),
      9.0 + rng.uniform(-2.0, 2.0), 9.0 + rng.uniform(-1.0, 1.0),
      8.0 + rng.uniform(-1.0, 1.0), spec.num_frames));
  spec.referent_id = 0;
  return spec;
}

ScenarioSpec entrance_scenario(std::uint64_t seed, Rng& rng) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.num_frames = 16;
  const int enter = rng.uniform_int(4, 6);
  const double x = 16.0 + rng.uniform(-4.0, 12.0);
  const double y = 24.0 + rng.uniform(-6.0, 6.0);
  ObjectScript ref = moving_object(0, ShapeKind::Ellipse, x, y,
                                   x + rng.uniform(6.0, 10.0),
                                   y + rng.uniform(-4.0, 4.0),
                                   18.0 + rng.uniform(-2.0, 2.0),
                                   16.0 + rng.uniform(-2.0, 2.0), spec.num_frames);
  ref.visible = {FrameInterval{enter, spec.num_frames}};
  spec.objects.push_back(ref);
  spec.objects.push_back(moving_object(
      1, ShapeKind::Rectangle, 40.0 + rng.uniform(-2.0, 2.0),
      8.0 + rng.uniform(-2.0, 2.0), 34.0 + rng.uniform(-2.0, 2.0),
      8.0 + rng.uniform(-2.0, 2.0), 8.0 + rng.uniform(-1.0, 1.0),
      7.0 + rng.uniform(-1.0, 1.0), spec.num_frames));
  spec.referent_id = 0;
  return spec;
}

ScenarioSpec distractors_scenario(std::uint64_t seed, Rng& rng) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.num_frames = 16;
  const double yr = 15.0 + rng.uniform(-2.0, 2.0);
  spec.objects.push_back(moving_object(
      0, ShapeKind::Ellipse, 9.0 + rng.uniform(-2.0, 2.0), yr,
      39.0 + rng.uniform(-2.0, 2.0), yr + rng.uniform(-2.0, 2.0),
      13.0 + rng.uniform(-2.0, 2.0), 12.0 + rng.uniform(-2.0, 2.0),
      spec.num_frames));
  // Visually near-identical distractor running the opposite lane.
  ObjectScript near1 = moving_object(
      1, ShapeKind::Rectangle, 39.0 + rng.uniform(-2.0, 2.0),
      34.0 + rng.uniform(-2.0, 2.0), 9.0 + rng.uniform(-2.0, 2.0),
      34.0 + rng.uniform(-2.0, 2.0), 12.0 + rng.uniform(-2.0, 2.0),
      11.0 + rng.uniform(-2.0, 2.0), spec.num_frames);
  near1.identity = IdentitySpec{IdentitySpec::Mode::Near, 0,
                                0.93 + rng.uniform(-0.02, 0.02), {}};
  spec.objects.push_back(near1);
  // Second near-identical distractor crossing the referent's lane.
  const double xc = 24.0 + rng.uniform(-3.0, 3.0);
  ObjectScript near2 = moving_object(2, ShapeKind::Ellipse, xc, 42.0, xc, 6.0,
                                     11.0 + rng.uniform(-2.0, 2.0),
                                     10.0 + rng.uniform(-2.0, 2.0),
                                     spec.num_frames);
  near2.identity = IdentitySpec{IdentitySpec::Mode::Near, 0,
                                0.90 + rng.uniform(-0.02, 0.02), {}};
  spec.objects.push_back(near2);
  spec.referent_id = 0;
  return spec;
}

ScenarioSpec scale_change_scenario(std::uint64_t seed, Rng& rng) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.num_frames = 16;
  const bool grow = (seed % 2) == 0;
  const double w0 = 6.0 + rng.uniform(-1.0, 1.0);
  const double w1 = std::max(3.2 * w0, 18.0);
  const double h0 = w0 * (0.9 + rng.uniform(0.0, 0.2));
  const double h1 = w1 * (0.9 + rng.uniform(0.0, 0.2));
  ObjectScript ref;
  ref.id = 0;
  ref.shape = ShapeKind::Ellipse;
  const double x0 = 18.0 + rng.uniform(-3.0, 3.0);
  const double y0 = 24.0 + rng.uniform(-3.0, 3.0);
  const double x1 = x0 + rng.uniform(4.0, 8.0);
  if (grow) {
    ref.keyframes = {Keyframe{0, x0, y0, w0, h0},
                     Keyframe{spec.num_frames - 1, x1, y0, w1, h1}};
  } else {
    ref.keyframes = {Keyframe{0, x0, y0, w1, h1},
                     Keyframe{spec.num_frames - 1, x1, y0, w0, h0}};
  }
  ref.visible = {FrameInterval{0, spec.num_frames}};
  spec.objects.push_back(ref);
  spec.objects.push_back(moving_object(
      1, ShapeKind::Rectangle, 8.0 + rng.uniform(-2.0, 2.0),
      40.0 + rng.uniform(-2.0, 2.0), 14.0 + rng.uniform(-2.0, 2.0),
      40.0 + rng.uniform(-2.0, 2.0), 8.0, 7.0, spec.num_frames));
  spec.referent_id = 0;
  return spec;
}

}  // namespace

ScenarioSpec make_builtin_scenario(const std::string& family, std::uint64_t seed) {
  Rng rng(hash_key({kTagSuite, hash_string(family), seed}));
  ScenarioSpec spec;
  if (family == "occlusion") {
    spec = occlusion_scenario(seed, rng);
  } else if (family == "entrance") {
    spec = entrance_scenario(seed, rng);
  } else if (family == "distractors") {
    spec = distractors_scenario(seed, rng);
  } else if (family == "scale-change") {
    spec = scale_change_scenario(seed, rng);
  } else {
    throw BadScriptError("unknown builtin suite: " + family);
  }
  validate(spec);
  return spec;
}

std::map<std::string, std::vector<ScenarioSpec>> builtin_suites() {
  std::map<std::string, std::vector<ScenarioSpec>> out;
  for (const auto& name : builtin_suite_names()) {
    auto& list = out[name];
    for (std::uint64_t s = 0; s < 5; ++s)
      list.push_back(make_builtin_scenario(name, s));
  }
  return out;
}

}  // namespace rvseg

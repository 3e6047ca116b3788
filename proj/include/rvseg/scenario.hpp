#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rvseg/geometry.hpp"

namespace rvseg {

enum class ShapeKind { Rectangle, Ellipse };

// Trajectory keyframe in pixel units; values between keyframes are linearly
// interpolated, ends are clamped.
struct Keyframe {
  int frame = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Half-open [begin, end) frame range.
struct FrameInterval {
  int begin = 0;
  int end = 0;
};

// How an object's identity vector is produced. "Near" makes a vector with
// an exact target cosine to another object's identity, which is how the
// visually-similar distractor scenarios are scripted.
struct IdentitySpec {
  enum class Mode { Seeded, Near, Explicit };
  Mode mode = Mode::Seeded;
  int of_id = -1;
  double cosine = 0.95;
  std::vector<double> values;
};

struct ObjectScript {
  int id = 0;
  ShapeKind shape = ShapeKind::Rectangle;
  std::vector<Keyframe> keyframes;
  std::vector<FrameInterval> visible;
  IdentitySpec identity;
};

// A scripted synthetic video plus the referent selector standing in for the
// language expression.
struct ScenarioSpec {
  int width = 48;
  int height = 48;
  int num_frames = 1;
  int referent_id = 0;
  std::uint64_t seed = 0;
  int embed_dim = 256;
  std::vector<ObjectScript> objects;
};

struct ObjectTruth {
  int id = 0;
  bool visible = false;
  Box box;   // tight bound of mask; empty when not visible
  Mask mask;  // empty when not visible
  std::vector<double> identity;
};

struct FrameTruth {
  int frame_index = 0;
  int width = 0;
  int height = 0;
  int referent_id = 0;
  bool referent_visible = false;
  std::vector<ObjectTruth> objects;

  const ObjectTruth& referent() const;
};

// Ground truth restricted to the referent, the view the matching cost
// consumes.
struct ReferentTruth {
  bool visible = false;
  Box box;
  Mask mask;
};

// What a detector is allowed to see: objects with geometry and appearance
// identity, no ids and no referent labeling.
struct ObjectView {
  Box box;
  Mask mask;
  std::vector<double> identity;
};

struct FrameView {
  int frame_index = 0;
  int width = 0;
  int height = 0;
  std::vector<ObjectView> objects;  // visible objects only
};

void validate(const ScenarioSpec& spec);

std::vector<FrameTruth> generate(const ScenarioSpec& spec);

ReferentTruth referent_truth(const FrameTruth& truth);
FrameView frame_view(const FrameTruth& truth);

// Identity vector of the referent; this is the grounded stand-in for the
// language expression.
std::vector<double> expression_embedding(const ScenarioSpec& spec);

// Scripted scenario families exercising the challenge phenomena:
// "occlusion", "entrance", "distractors", "scale-change".
std::vector<std::string> builtin_suite_names();
ScenarioSpec make_builtin_scenario(const std::string& family, std::uint64_t seed);
std::map<std::string, std::vector<ScenarioSpec>> builtin_suites();

}  // namespace rvseg

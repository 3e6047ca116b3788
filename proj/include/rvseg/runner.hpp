#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rvseg/detector.hpp"
#include "rvseg/matching.hpp"
#include "rvseg/metrics.hpp"
#include "rvseg/propagation.hpp"
#include "rvseg/scenario.hpp"

namespace rvseg {

// Sequential access to ground truth; the pipelines only ever pull the frame
// they are currently processing, which instrumented sources can verify.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual int size() const = 0;
  virtual const FrameTruth& frame(int index) = 0;
};

class VectorFrameSource final : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<FrameTruth> frames)
      : frames_(std::move(frames)) {}
  int size() const override { return static_cast<int>(frames_.size()); }
  const FrameTruth& frame(int index) override {
    return frames_[static_cast<std::size_t>(index)];
  }

 private:
  std::vector<FrameTruth> frames_;
};

struct FrameRecord {
  int frame_index = 0;
  int clip_index = 0;
  std::vector<QueryState> input_queries;
  std::vector<Prediction> predictions;
  int selected_index = -1;   // inference selection (highest positive score)
  bool empty_query = false;
  Assignment assignment;     // truth-based, recorded for analysis only
  bool handoff_after = false;

  bool operator==(const FrameRecord&) const = default;
};

struct RunTrace {
  int window = 1;  // effective clip length; 1 means fully online
  std::uint64_t seed = 0;
  std::vector<FrameRecord> frames;
  std::vector<Assignment> clip_assignments;  // one per clip
  std::vector<Mask> output_masks;            // final referent mask per frame

  bool operator==(const RunTrace&) const = default;

  int handoff_count() const {
    int n = 0;
    for (const auto& f : frames) n += f.handoff_after ? 1 : 0;
    return n;
  }
};

// Frame-by-frame pipeline: detect, select the highest-score query, record
// the truth-based assignment, propagate into the next frame.
RunTrace run_online(FrameSource& source, const OracleParams& oracle,
                    const PropagationConfig& prop, std::uint64_t run_seed,
                    const MatchCostWeights& weights = {});
RunTrace run_online(const ScenarioSpec& spec, const OracleParams& oracle,
                    const PropagationConfig& prop, std::uint64_t run_seed,
                    const MatchCostWeights& weights = {});

// Clip-by-clip pipeline: within a clip the input query set is replicated
// across frames (one trajectory per query), the positive trajectory is
// matched at sequence level, and only the high-score query of the clip's
// last frame is handed into the next clip.
RunTrace run_semi_online(FrameSource& source, const OracleParams& oracle,
                         const PropagationConfig& prop, int window,
                         std::uint64_t run_seed,
                         const MatchCostWeights& weights = {});
RunTrace run_semi_online(const ScenarioSpec& spec, const OracleParams& oracle,
                         const PropagationConfig& prop, int window,
                         std::uint64_t run_seed,
                         const MatchCostWeights& weights = {});

// Metrics of a finished run against the scenario's referent ground truth.
MetricsReport trace_metrics(const RunTrace& trace,
                            std::span<const FrameTruth> truths);

struct AblationVariant {
  std::string label;
  PropagationConfig prop;
};

struct AblationAxis {
  std::string name;
  std::vector<AblationVariant> variants;
};

struct AblationRow {
  std::string label;
  double jf_mean = 0.0;
  double j_mean = 0.0;
  double f_mean = 0.0;
  int runs = 0;
};

struct AblationTable {
  std::string axis;
  std::vector<AblationRow> rows;
};

// The four ablation axes: update flags, propagation method, top-k
// propagation count, and initial query count.
std::vector<AblationAxis> default_ablation_axes(const PropagationConfig& base);

AblationTable run_ablation(const AblationAxis& axis,
                           std::span<const std::string> suites,
                           std::span<const std::uint64_t> seeds,
                           const OracleParams& oracle, int window,
                           const MatchCostWeights& weights = {});

}  // namespace rvseg

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rvseg/geometry.hpp"
#include "rvseg/query.hpp"
#include "rvseg/scenario.hpp"

namespace rvseg {

// One query's frame output: box, class score, mask and the output embedding
// the next frame's content query is built from.
struct Prediction {
  Box box;
  double score = 0.0;  // in (0,1)
  Mask mask;
  std::vector<double> output_embedding;
  std::vector<double> position_passthrough;

  bool operator==(const Prediction&) const = default;
};

struct OracleParams {
  double score_sharpness = 8.0;
  double prior_gain = 0.5;
  double box_noise_sigma = 0.01;
  double distractor_confusion = 0.15;
  std::uint64_t seed = 0;
};

void validate(const OracleParams& params);

// Per-frame set prediction contract. Implementations must emit exactly one
// prediction per input query and may not consult ground-truth labeling
// beyond the appearance view they are handed.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Prediction> detect(const FrameView& frame,
                                         std::span<const QueryState> queries) const = 0;
};

// Synthetic stand-in for the neural set predictor. Grounding runs through
// embedding affinity only: each query scores the frame's objects by how
// well the expression channel and its content embedding match the object's
// identity vector, minus seeded confusion noise. Detection quality is
// coupled to the query's base box so that a propagated spatial prior
// genuinely improves the emitted box and mask.
class SyntheticOracle final : public Detector {
 public:
  SyntheticOracle(OracleParams params, std::vector<double> expression_embedding);

  std::vector<Prediction> detect(const FrameView& frame,
                                 std::span<const QueryState> queries) const override;

  const OracleParams& params() const { return params_; }

 private:
  OracleParams params_;
  std::vector<double> expression_;
};

}  // namespace rvseg

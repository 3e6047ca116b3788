#pragma once

#include <span>
#include <vector>

#include "rvseg/detector.hpp"
#include "rvseg/query.hpp"

namespace rvseg {

// Score threshold under which a prediction counts as an empty query. Used
// for reporting only; empty queries keep propagating.
constexpr double kEmptyQueryThreshold = 0.5;

// Index of the highest class score; ties break to the lowest index.
int select_query(std::span<const Prediction> preds);

bool is_empty_query(const Prediction& pred, double threshold = kEmptyQueryThreshold);

// The single-query propagation step: the selected prediction's box becomes
// the next base box, the output embedding (through the embed transform)
// becomes the next content query, and the position embedding is carried
// over unless the position-update ablation is on.
QueryState propagate_selected(const Prediction& selected, const QueryState& prev,
                              const PropagationConfig& cfg,
                              const EmbedTransform& tf);

// Full per-frame propagation under the configured method. `init_seed` is
// the run seed the learned query set is derived from (Concatenation and
// NoPropagation re-materialize it; it is run-constant).
std::vector<QueryState> propagate(std::span<const Prediction> preds,
                                  std::span<const QueryState> states,
                                  const PropagationConfig& cfg,
                                  const EmbedTransform& tf,
                                  std::uint64_t init_seed);

// The indices propagate() would select, highest score first (top_k of them
// for Ours/Concatenation). Exposed for trace recording.
std::vector<int> top_k_by_score(std::span<const Prediction> preds, int k);

}  // namespace rvseg

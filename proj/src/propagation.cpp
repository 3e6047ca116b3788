#include "rvseg/propagation.hpp"

#include <algorithm>
#include <numeric>

#include "rvseg/errors.hpp"

namespace rvseg {

int select_query(std::span<const Prediction> preds) {
  if (preds.empty()) throw NoPredictionsError("select_query");
  int best = 0;
  for (std::size_t i = 1; i < preds.size(); ++i)
    if (preds[i].score > preds[static_cast<std::size_t>(best)].score)
      best = static_cast<int>(i);
  return best;
}

bool is_empty_query(const Prediction& pred, double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0)
    throw ConfigError("empty-query threshold must be in (0,1)");
  return pred.score < threshold;
}

QueryState propagate_selected(const Prediction& selected, const QueryState& prev,
                              const PropagationConfig& cfg,
                              const EmbedTransform& tf) {
  QueryState next;
  next.origin = QueryOrigin::Propagated;
  next.base_box = selected.box;
  next.content = cfg.update_query ? tf.apply(selected.output_embedding)
                                  : prev.content;
  next.position = prev.position;
  if (cfg.update_position)
    write_box_into_position(next.position, selected.box);
  return next;
}

std::vector<int> top_k_by_score(std::span<const Prediction> preds, int k) {
  if (k > static_cast<int>(preds.size()))
    throw TopKTooLargeError("top_k exceeds available predictions");
  std::vector<int> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return preds[static_cast<std::size_t>(a)].score >
           preds[static_cast<std::size_t>(b)].score;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

std::vector<QueryState> propagate(std::span<const Prediction> preds,
                                  std::span<const QueryState> states,
                                  const PropagationConfig& cfg,
                                  const EmbedTransform& tf,
                                  std::uint64_t init_seed) {
  if (preds.size() != states.size())
    throw ShapeMismatchError("propagate: predictions vs states");
  if (preds.empty()) throw NoPredictionsError("propagate");
  validate(cfg);

  std::vector<QueryState> next;
  switch (cfg.method) {
    case PropagationMethod::Ours: {
      for (int idx : top_k_by_score(preds, cfg.top_k))
        next.push_back(propagate_selected(preds[static_cast<std::size_t>(idx)],
                                          states[static_cast<std::size_t>(idx)],
                                          cfg, tf));
      break;
    }
    case PropagationMethod::Concatenation: {
      for (int idx : top_k_by_score(preds, cfg.top_k))
        next.push_back(propagate_selected(preds[static_cast<std::size_t>(idx)],
                                          states[static_cast<std::size_t>(idx)],
                                          cfg, tf));
      for (auto& q : init_queries(cfg, init_seed)) next.push_back(std::move(q));
      break;
    }
    case PropagationMethod::Fixed: {
      // Keep every query, no selection.
      for (std::size_t i = 0; i < preds.size(); ++i)
        next.push_back(propagate_selected(preds[i], states[i], cfg, tf));
      break;
    }
    case PropagationMethod::NoPropagation: {
      next = init_queries(cfg, init_seed);
      break;
    }
  }
  return next;
}

}  // namespace rvseg

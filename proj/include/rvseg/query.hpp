#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rvseg/geometry.hpp"

namespace rvseg {

enum class QueryOrigin { Learned, Propagated };

// Per-query propagated state: content embedding (semantics), position
// embedding (spatial prior) and the base box the decoder refines from.
struct QueryState {
  std::vector<double> content;
  std::vector<double> position;
  Box base_box;
  QueryOrigin origin = QueryOrigin::Learned;

  bool operator==(const QueryState&) const = default;
};

enum class PropagationMethod { Ours, Concatenation, Fixed, NoPropagation };

std::string to_string(PropagationMethod m);
PropagationMethod propagation_method_from_string(const std::string& s);

struct PropagationConfig {
  PropagationMethod method = PropagationMethod::Ours;
  int top_k = 1;
  bool update_query = true;
  bool update_position = false;
  int initial_queries = 5;
  int embed_dim = 256;
  std::string embed_transform = "identity";

  bool operator==(const PropagationConfig&) const = default;
};

void validate(const PropagationConfig& cfg);

// Fixed spatial layout of learned base boxes: center first, then quadrant
// centers, then a finer grid; all with w = h = 0.4.
constexpr int kMaxInitialQueries = 16;
Box anchor_layout(int index);

// The designated leading components of a position vector carry the box the
// decoder would derive from it (logit-encoded). Learned positions encode
// their anchor; rewriting them with a predicted box is the
// "position update" ablation.
Box position_to_box(std::span<const double> position);
void write_box_into_position(std::vector<double>& position, const Box& box);

// True when the position decodes to one of the canonical learned anchors,
// i.e. it is still a token from the learned dictionary.
bool position_is_canonical(std::span<const double> position);

// Stand-in for the learned embedding map applied during propagation:
// an affine map on content vectors, deterministic given seed.
class EmbedTransform {
 public:
  static EmbedTransform identity(int dim);
  static EmbedTransform seeded_affine(int dim, std::uint64_t seed);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::string id_;
  int dim_ = 0;
  bool is_identity_ = true;
  std::vector<double> matrix_;  // dim x dim, row-major
  std::vector<double> bias_;
};

EmbedTransform make_embed_transform(const std::string& id, int dim,
                                    std::uint64_t seed);

// N learned queries, deterministic given seed, with base boxes spread over
// the frame via the anchor layout.
std::vector<QueryState> init_queries(const PropagationConfig& cfg,
                                     std::uint64_t seed);

}  // namespace rvseg

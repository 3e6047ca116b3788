#include "rvseg/query.hpp"

#include <algorithm>
#include <cmath>

#include "rvseg/errors.hpp"
#include "rvseg/rng.hpp"

namespace rvseg {

namespace {

constexpr std::uint64_t kTagContent = 0x434e544eULL;   // "CNTN"
constexpr std::uint64_t kTagPosition = 0x504f5354ULL;  // "POST"
constexpr std::uint64_t kTagAffine = 0x4146464eULL;    // "AFFN"

constexpr double kLogitEps = 1e-6;

double logit(double v) {
  const double p = std::clamp(v, kLogitEps, 1.0 - kLogitEps);
  return std::log(p / (1.0 - p));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string to_string(PropagationMethod m) {
  switch (m) {
    case PropagationMethod::Ours: return "ours";
    case PropagationMethod::Concatenation: return "concatenation";
    case PropagationMethod::Fixed: return "fixed";
    case PropagationMethod::NoPropagation: return "no-propagation";
  }
  return "ours";
}

PropagationMethod propagation_method_from_string(const std::string& s) {
  if (s == "ours") return PropagationMethod::Ours;
  if (s == "concatenation") return PropagationMethod::Concatenation;
  if (s == "fixed") return PropagationMethod::Fixed;
  if (s == "no-propagation") return PropagationMethod::NoPropagation;
  throw ConfigError("unknown propagation method: " + s);
}

void validate(const PropagationConfig& cfg) {
  if (cfg.top_k < 1) throw ConfigError("top_k must be >= 1");
  if (cfg.initial_queries < 1 || cfg.initial_queries > kMaxInitialQueries)
    throw ConfigError("initial_queries must be in [1, 16]");
  if (cfg.embed_dim < 8) throw ConfigError("embed_dim must be >= 8");
  if (cfg.method == PropagationMethod::NoPropagation && cfg.top_k != 1)
    throw ConfigError("no-propagation does not select queries; top_k must stay 1");
  if (cfg.top_k > cfg.initial_queries)
    throw ConfigError("top_k cannot exceed initial_queries");
}

Box anchor_layout(int index) {
  static const double centers[kMaxInitialQueries][2] = {
      {0.500, 0.500}, {0.250, 0.250}, {0.750, 0.250}, {0.250, 0.750},
      {0.750, 0.750}, {0.500, 0.250}, {0.250, 0.500}, {0.750, 0.500},
      {0.500, 0.750}, {0.125, 0.125}, {0.875, 0.125}, {0.125, 0.875},
      {0.875, 0.875}, {0.375, 0.500}, {0.625, 0.500}, {0.500, 0.375}};
  if (index < 0 || index >= kMaxInitialQueries)
    throw ConfigError("anchor index out of range");
  return Box{centers[index][0], centers[index][1], 0.4, 0.4};
}

Box position_to_box(std::span<const double> position) {
  if (position.size() < 4)
    throw ConfigError("position vector must have at least 4 components");
  Box b;
  b.cx = sigmoid(position[0]);
  b.cy = sigmoid(position[1]);
  b.w = std::clamp(sigmoid(position[2]), 1e-4, 1.0);
  b.h = std::clamp(sigmoid(position[3]), 1e-4, 1.0);
  return b;
}

void write_box_into_position(std::vector<double>& position, const Box& box) {
  if (position.size() < 4)
    throw ConfigError("position vector must have at least 4 components");
  position[0] = logit(box.cx);
  position[1] = logit(box.cy);
  position[2] = logit(box.w);
  position[3] = logit(box.h);
}

bool position_is_canonical(std::span<const double> position) {
  const Box b = position_to_box(position);
  for (int i = 0; i < kMaxInitialQueries; ++i) {
    const Box a = anchor_layout(i);
    if (std::abs(a.cx - b.cx) < 1e-9 && std::abs(a.cy - b.cy) < 1e-9 &&
        std::abs(a.w - b.w) < 1e-9 && std::abs(a.h - b.h) < 1e-9)
      return true;
  }
  return false;
}

EmbedTransform EmbedTransform::identity(int dim) {
  EmbedTransform t;
  t.id_ = "identity";
  t.dim_ = dim;
  t.is_identity_ = true;
  return t;
}

EmbedTransform EmbedTransform::seeded_affine(int dim, std::uint64_t seed) {
  EmbedTransform t;
  t.id_ = "seeded-affine";
  t.dim_ = dim;
  t.is_identity_ = false;
  Rng rng(hash_key({seed, kTagAffine, static_cast<std::uint64_t>(dim)}));
  // Identity plus a small seeded perturbation: injective, norm-preserving
  // to first order.
  t.matrix_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  const double scale = 0.05 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double v = rng.gaussian() * scale;
      if (i == j) v += 1.0;
      t.matrix_[static_cast<std::size_t>(i) * dim + j] = v;
    }
  }
  t.bias_ = rng.gaussian_vector(dim);
  for (auto& b : t.bias_) b *= 0.01;
  return t;
}

std::vector<double> EmbedTransform::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw ShapeMismatchError("embed transform dimension");
  if (is_identity_) return std::vector<double>(x.begin(), x.end());
  std::vector<double> y(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    double s = bias_[static_cast<std::size_t>(i)];
    const double* row = &matrix_[static_cast<std::size_t>(i) * dim_];
    for (int j = 0; j < dim_; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

EmbedTransform make_embed_transform(const std::string& id, int dim,
                                    std::uint64_t seed) {
  if (id == "identity") return EmbedTransform::identity(dim);
  if (id == "seeded-affine") return EmbedTransform::seeded_affine(dim, seed);
  throw ConfigError("unknown embed transform: " + id);
}

std::vector<QueryState> init_queries(const PropagationConfig& cfg,
                                     std::uint64_t seed) {
  validate(cfg);
  std::vector<QueryState> out;
  out.reserve(static_cast<std::size_t>(cfg.initial_queries));
  for (int j = 0; j < cfg.initial_queries; ++j) {
    QueryState q;
    q.origin = QueryOrigin::Learned;
    Rng content_rng(hash_key({seed, kTagContent, static_cast<std::uint64_t>(j)}));
    q.content = content_rng.unit_vector(cfg.embed_dim);
    Rng pos_rng(hash_key({seed, kTagPosition, static_cast<std::uint64_t>(j)}));
    q.position = pos_rng.gaussian_vector(cfg.embed_dim);
    for (auto& v : q.position) v *= 0.1;
    write_box_into_position(q.position, anchor_layout(j));
    // Base box is derived from the position vector, not stored separately.
    q.base_box = position_to_box(q.position);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace rvseg

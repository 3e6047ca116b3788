#include <doctest.h>

#include <cmath>
#include <set>

#include "rvseg/errors.hpp"
#include "rvseg/query.hpp"
#include "rvseg/rng.hpp"

using namespace rvseg;

TEST_CASE("init_queries determinism and layout") {
  PropagationConfig cfg;
  cfg.embed_dim = 64;
  const auto a = init_queries(cfg, 42);
  const auto b = init_queries(cfg, 42);
  CHECK(a == b);
  REQUIRE(a.size() == 5);

  // Base boxes are pairwise distinct and spread per the anchor layout.
  std::set<std::pair<double, double>> centers;
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a[j].origin == QueryOrigin::Learned);
    CHECK(static_cast<int>(a[j].content.size()) == 64);
    CHECK(static_cast<int>(a[j].position.size()) == 64);
    centers.insert({a[j].base_box.cx, a[j].base_box.cy});
    const Box anchor = anchor_layout(static_cast<int>(j));
    CHECK(std::abs(a[j].base_box.cx - anchor.cx) < 1e-9);
    CHECK(std::abs(a[j].base_box.w - anchor.w) < 1e-9);
  }
  CHECK(centers.size() == 5);

  // Content vectors are unit-norm and differ across queries.
  for (const auto& q : a) {
    double n2 = 0.0;
    for (double v : q.content) n2 += v * v;
    CHECK(std::abs(n2 - 1.0) < 1e-9);
  }
  CHECK(a[0].content != a[1].content);

  PropagationConfig one = cfg;
  one.initial_queries = 1;
  one.top_k = 1;
  CHECK(init_queries(one, 7).size() == 1);

  // A different seed changes the embeddings but not the anchor layout.
  const auto c = init_queries(cfg, 43);
  CHECK(c[0].content != a[0].content);
  CHECK(c[0].base_box == a[0].base_box);
}

TEST_CASE("base box derives from the position vector") {
  PropagationConfig cfg;
  cfg.embed_dim = 32;
  for (const auto& q : init_queries(cfg, 3)) {
    const Box decoded = position_to_box(q.position);
    CHECK(decoded == q.base_box);
    CHECK(position_is_canonical(q.position));
  }
}

TEST_CASE("position codec round-trips boxes") {
  Rng rng(44);
  std::vector<double> pos(16, 0.0);
  for (int i = 0; i < 200; ++i) {
    Box b;
    b.cx = rng.uniform(0.05, 0.95);
    b.cy = rng.uniform(0.05, 0.95);
    b.w = rng.uniform(0.05, 0.9);
    b.h = rng.uniform(0.05, 0.9);
    write_box_into_position(pos, b);
    const Box back = position_to_box(pos);
    CHECK(std::abs(back.cx - b.cx) < 1e-9);
    CHECK(std::abs(back.cy - b.cy) < 1e-9);
    CHECK(std::abs(back.w - b.w) < 1e-9);
    CHECK(std::abs(back.h - b.h) < 1e-9);
    CHECK(!position_is_canonical(pos));
  }
}

TEST_CASE("propagation config validation") {
  PropagationConfig cfg;
  CHECK_NOTHROW(validate(cfg));

  PropagationConfig bad = cfg;
  bad.top_k = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.method = PropagationMethod::NoPropagation;
  bad.top_k = 2;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.initial_queries = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.initial_queries = 17;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.top_k = 6;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.embed_dim = 4;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  CHECK(propagation_method_from_string("fixed") == PropagationMethod::Fixed);
  CHECK_THROWS_AS(propagation_method_from_string("nope"), ConfigError);
}

TEST_CASE("embed transforms") {
  Rng rng(45);
  const auto x = rng.unit_vector(32);

  const EmbedTransform id = make_embed_transform("identity", 32, 0);
  CHECK(id.apply(x) == x);

  const EmbedTransform aff = make_embed_transform("seeded-affine", 32, 9);
  const EmbedTransform aff2 = make_embed_transform("seeded-affine", 32, 9);
  CHECK(aff.apply(x) == aff2.apply(x));
  CHECK(aff.apply(x) != x);

  const auto y = rng.unit_vector(32);
  CHECK(aff.apply(x) != aff.apply(y));

  CHECK_THROWS_AS(id.apply(rng.unit_vector(16)), ShapeMismatchError);
  CHECK_THROWS_AS(make_embed_transform("mystery", 32, 0), ConfigError);
}

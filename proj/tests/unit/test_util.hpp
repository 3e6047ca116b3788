#pragma once

#include <vector>

#include "rvseg/detector.hpp"
#include "rvseg/geometry.hpp"
#include "rvseg/rng.hpp"

namespace rvseg::testutil {

inline Box random_box(Rng& rng) {
  Box b;
  b.w = rng.uniform(0.05, 0.5);
  b.h = rng.uniform(0.05, 0.5);
  b.cx = rng.uniform(b.w / 2, 1.0 - b.w / 2);
  b.cy = rng.uniform(b.h / 2, 1.0 - b.h / 2);
  return b;
}

inline Mask random_mask(Rng& rng, int w, int h, double density = 0.4) {
  Mask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (rng.uniform() < density) m.set(x, y, true);
  return m;
}

inline Prediction random_prediction(Rng& rng, int mask_w, int mask_h, int dim = 8) {
  Prediction p;
  p.box = random_box(rng);
  p.score = rng.uniform(0.02, 0.98);
  p.mask = random_mask(rng, mask_w, mask_h);
  p.output_embedding = rng.unit_vector(dim);
  p.position_passthrough = rng.gaussian_vector(dim);
  return p;
}

}  // namespace rvseg::testutil

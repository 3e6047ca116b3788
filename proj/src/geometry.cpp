#include "rvseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rvseg/errors.hpp"

namespace rvseg {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Overlap of [a0,a1] and [b0,b1], zero when disjoint.
double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

struct Extent {
  double x0, y0, x1, y1;
};

Extent extent_of(const Box& b) {
  return Extent{b.cx - b.w / 2.0, b.cy - b.h / 2.0, b.cx + b.w / 2.0,
                b.cy + b.h / 2.0};
}

}  // namespace

Corners box_to_corners(const Box& b, int width, int height) {
  if (b.is_empty()) throw EmptyBoxError("box_to_corners");
  if (width < 1 || height < 1)
    throw ShapeMismatchError("box_to_corners: non-positive image size");
  const Extent e = extent_of(b);
  return Corners{e.x0 * width, e.y0 * height, e.x1 * width, e.y1 * height};
}

Box corners_to_box(const Corners& c, int width, int height) {
  if (width < 1 || height < 1)
    throw ShapeMismatchError("corners_to_box: non-positive image size");
  Box b;
  b.cx = (c.x0 + c.x1) / 2.0 / width;
  b.cy = (c.y0 + c.y1) / 2.0 / height;
  b.w = (c.x1 - c.x0) / width;
  b.h = (c.y1 - c.y0) / height;
  return b;
}

double box_area(const Box& b) { return b.is_empty() ? 0.0 : b.w * b.h; }

double box_iou(const Box& a, const Box& b) {
  if (a.is_empty() && b.is_empty()) return 1.0;
  if (a.is_empty() || b.is_empty()) return 0.0;
  const Extent ea = extent_of(a);
  const Extent eb = extent_of(b);
  const double inter = interval_overlap(ea.x0, ea.x1, eb.x0, eb.x1) *
                       interval_overlap(ea.y0, ea.y1, eb.y0, eb.y1);
  const double uni = box_area(a) + box_area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double box_giou(const Box& a, const Box& b) {
  if (a.is_empty() || b.is_empty()) throw EmptyBoxError("box_giou");
  const Extent ea = extent_of(a);
  const Extent eb = extent_of(b);
  const double inter = interval_overlap(ea.x0, ea.x1, eb.x0, eb.x1) *
                       interval_overlap(ea.y0, ea.y1, eb.y0, eb.y1);
  const double uni = box_area(a) + box_area(b) - inter;
  const double hull_w = std::max(ea.x1, eb.x1) - std::min(ea.x0, eb.x0);
  const double hull_h = std::max(ea.y1, eb.y1) - std::min(ea.y0, eb.y0);
  const double hull = hull_w * hull_h;
  const double iou = uni > 0.0 ? inter / uni : 0.0;
  return hull > 0.0 ? iou - (hull - uni) / hull : iou;
}

Box compose_box(const Box& base, const std::array<double, 4>& offset) {
  Box b;
  b.cx = clamp01(base.cx + offset[0]);
  b.cy = clamp01(base.cy + offset[1]);
  b.w = std::clamp(base.w + offset[2], 1e-4, 1.0);
  b.h = std::clamp(base.h + offset[3], 1e-4, 1.0);
  return b;
}

Mask::Mask(int width, int height)
    : width_(width),
      height_(height),
      bits_(static_cast<std::size_t>(width) * height, 0) {}

Mask Mask::filled(int width, int height, bool value) {
  Mask m(width, height);
  if (value) std::fill(m.bits_.begin(), m.bits_.end(), 1);
  return m;
}

int Mask::popcount() const {
  int n = 0;
  for (std::uint8_t b : bits_) n += b;
  return n;
}

double mask_iou(const Mask& a, const Mask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw ShapeMismatchError("mask_iou");
  int inter = 0;
  int uni = 0;
  const auto& ba = a.bits();
  const auto& bb = b.bits();
  for (std::size_t i = 0; i < ba.size(); ++i) {
    inter += ba[i] & bb[i];
    uni += ba[i] | bb[i];
  }
  // Empty-vs-empty scores 1: correctly predicting "no object" is perfect.
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::string rle_encode(const Mask& m) {
  std::ostringstream out;
  out << m.width() << ' ' << m.height();
  const auto& bits = m.bits();
  std::uint8_t value = 0;
  std::size_t run = 0;
  for (std::uint8_t b : bits) {
    if (b == value) {
      ++run;
    } else {
      out << ' ' << run;
      value = b;
      run = 1;
    }
  }
  out << ' ' << run;
  return out.str();
}

Mask rle_decode(const std::string& text) {
  std::istringstream in(text);
  long long w = 0;
  long long h = 0;
  if (!(in >> w >> h) || w < 1 || h < 1)
    throw ShapeMismatchError("rle_decode: bad header");
  Mask m(static_cast<int>(w), static_cast<int>(h));
  const std::size_t total = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  long long run = 0;
  bool first = true;
  while (in >> run) {
    if (run < 0 || (!first && run == 0))
      throw ShapeMismatchError("rle_decode: invalid run length");
    if (pos + static_cast<std::size_t>(run) > total)
      throw ShapeMismatchError("rle_decode: runs exceed W*H");
    if (value) {
      for (long long i = 0; i < run; ++i)
        m.bits()[pos + static_cast<std::size_t>(i)] = 1;
    }
    pos += static_cast<std::size_t>(run);
    value = value ? 0 : 1;
    first = false;
  }
  if (!in.eof()) throw ShapeMismatchError("rle_decode: trailing garbage");
  if (pos != total) throw ShapeMismatchError("rle_decode: runs do not sum to W*H");
  return m;
}

Box mask_tight_box(const Mask& m) {
  int min_x = m.width();
  int min_y = m.height();
  int max_x = -1;
  int max_y = -1;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) return Box::empty();
  Corners c{static_cast<double>(min_x), static_cast<double>(min_y),
            static_cast<double>(max_x + 1), static_cast<double>(max_y + 1)};
  return corners_to_box(c, m.width(), m.height());
}

std::array<double, 2> mask_centroid(const Mask& m) {
  double sx = 0.0;
  double sy = 0.0;
  int n = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      sx += x + 0.5;
      sy += y + 0.5;
      ++n;
    }
  }
  if (n == 0) throw EmptyBoxError("mask_centroid of empty mask");
  return {sx / n / m.width(), sy / n / m.height()};
}

Mask mask_dilate(const Mask& m, int r) {
  if (r <= 0) return m;
  Mask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      const int y0 = std::max(0, y - r);
      const int y1 = std::min(m.height() - 1, y + r);
      const int x0 = std::max(0, x - r);
      const int x1 = std::min(m.width() - 1, x + r);
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) out.set(xx, yy, true);
    }
  }
  return out;
}

Mask mask_erode(const Mask& m, int r) {
  if (r <= 0) return m;
  Mask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      bool keep = true;
      for (int yy = y - r; keep && yy <= y + r; ++yy) {
        for (int xx = x - r; xx <= x + r; ++xx) {
          if (yy < 0 || xx < 0 || yy >= m.height() || xx >= m.width() ||
              !m.at(xx, yy)) {
            keep = false;
            break;
          }
        }
      }
      out.set(x, y, keep);
    }
  }
  return out;
}

}  // namespace rvseg

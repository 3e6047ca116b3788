#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rvseg {

// Axis-aligned box in normalized center/size coordinates relative to the
// image: cx, cy in [0,1], w, h in (0,1] for non-empty boxes. The empty
// sentinel (w = h = 0) stands for "no object".
struct Box {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  static Box empty() { return Box{}; }
  bool is_empty() const { return w <= 0.0 || h <= 0.0; }

  bool operator==(const Box&) const = default;
};

// Corner representation in pixel units, x0 <= x1 and y0 <= y1.
struct Corners {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

Corners box_to_corners(const Box& b, int width, int height);
Box corners_to_box(const Corners& c, int width, int height);

double box_area(const Box& b);
double box_iou(const Box& a, const Box& b);
double box_giou(const Box& a, const Box& b);

// base + offset componentwise, then clamp cx, cy to [0,1] and w, h to
// [1e-4, 1]. Absorbs out-of-range offsets instead of erroring.
Box compose_box(const Box& base, const std::array<double, 4>& offset);

// Binary mask, row-major, origin at the top-left pixel.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height);
  static Mask filled(int width, int height, bool value);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  int popcount() const;
  bool empty() const { return popcount() == 0; }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  bool operator==(const Mask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

double mask_iou(const Mask& a, const Mask& b);

// Value-alternating run lengths starting with the zero count:
// "W H n0 n1 n2 ..." with runs summing to W*H.
std::string rle_encode(const Mask& m);
Mask rle_decode(const std::string& text);

// Tight normalized bounding box of the set pixels; empty mask -> empty box.
Box mask_tight_box(const Mask& m);

// Centroid of set pixels in normalized coordinates (pixel centers).
// Mask must be non-empty.
std::array<double, 2> mask_centroid(const Mask& m);

// Chebyshev-ball morphology with radius r >= 0.
Mask mask_dilate(const Mask& m, int r);
Mask mask_erode(const Mask& m, int r);

}  // namespace rvseg

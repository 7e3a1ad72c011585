#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spikefield/errors.hpp"

namespace spikefield {

struct PixelCoord {
  int x = 0;  // column
  int y = 0;  // row

  bool operator==(const PixelCoord&) const = default;
};

// Non-negative scene intensity per pixel, in accumulation units per clock
// tick (the amount a spiking pixel integrates in one tick).
struct IntensityImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  IntensityImage() = default;
  IntensityImage(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }

  bool same_shape(const IntensityImage& o) const {
    return width == o.width && height == o.height;
  }

  void validate(const std::string& what = "intensity image") const {
    if (values.size() != static_cast<std::size_t>(width) * height)
      throw DimensionMismatch(what + ": value count does not match dimensions");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(what + ": values must be finite and >= 0");
  }
};

inline void require_in_bounds(const PixelCoord& p, int width, int height) {
  if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
    throw OutOfBounds("pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") outside " + std::to_string(width) + "x" + std::to_string(height));
}

}  // namespace spikefield

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvpano/error.hpp"

namespace mvpano {

/// Dense row-major raster, interleaved channels. The shared pixel container
/// for RGB images (float, 3ch), depth maps (double, 1ch) and masks (uint8).
template <class T>
struct Raster {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<T> data;

  Raster() = default;
  Raster(int h, int w, int c = 1, T fill = T{})
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {
    if (h < 0 || w < 0 || c <= 0) throw_config("Raster: non-positive dimensions");
  }

  std::size_t index(int y, int x, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }

  T& at(int y, int x, int c = 0) { return data[index(y, x, c)]; }
  const T& at(int y, int x, int c = 0) const { return data[index(y, x, c)]; }

  bool in_bounds(int y, int x) const { return y >= 0 && y < height && x >= 0 && x < width; }

  bool same_shape(const Raster& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  std::size_t size() const { return data.size(); }
};

using ImageF = Raster<float>;    // rgb in [0,1]
using DepthMap = Raster<double>; // metric range, -1 = invalid/sky
using MaskU8 = Raster<std::uint8_t>;

inline int count_nonzero(const MaskU8& m) {
  int n = 0;
  for (auto v : m.data) n += (v != 0);
  return n;
}

}  // namespace mvpano

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mvpano/error.hpp"
#include "mvpano/image.hpp"
#include "mvpano/kernels.hpp"
#include "mvpano/rng.hpp"

namespace mvpano::feat {

/// One 3x3 (by default) convolution layer of the bank.
struct ConvLayer {
  int out_ch = 0;
  int in_ch = 0;
  int kh = 3;
  int kw = 3;
  std::vector<float> w;  // (out, in, kh, kw)
  std::vector<float> b;  // (out)
};

/// Fixed convolutional encoder standing in for a trained segmentation
/// encoder. Blocks are conv stacks separated by 2x2 max downsampling, so
/// features taken at block k live at stride 2^(k-1).
struct FeatureBank {
  std::vector<std::vector<ConvLayer>> blocks;
  float slope = 0.1f;  // leaky-rectifier slope
  std::uint64_t seed = 0;

  int block_count() const { return static_cast<int>(blocks.size()); }

  int stride_at(int block_index) const { return 1 << (block_index - 1); }

  int channels_at(int block_index) const {
    return blocks[block_index - 1].back().out_ch;
  }

  void validate() const {
    int in = 3;
    for (const auto& block : blocks) {
      if (block.empty()) throw_config("FeatureBank: empty block");
      for (const auto& layer : block) {
        if (layer.in_ch != in)
          throw_config("FeatureBank: layer input channels do not chain");
        if (layer.w.size() != static_cast<std::size_t>(layer.out_ch) * layer.in_ch *
                                  layer.kh * layer.kw ||
            layer.b.size() != static_cast<std::size_t>(layer.out_ch))
          throw_config("FeatureBank: weight buffer size mismatch");
        in = layer.out_ch;
      }
    }
  }
};

/// Dense feature grid; stride is input pixels per cell.
struct FeatureMap {
  int channels = 0;
  int h = 0;
  int w = 0;
  int stride = 1;
  std::vector<float> data;  // (channels, h, w)

  float& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * h + y) * w + x];
  }
  const float& at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * h + y) * w + x];
  }
};

/// Bank with one 3x3 conv per block and weights from a fan-in-scaled uniform
/// distribution, fully determined by the seed. Requires at least four blocks
/// so block-4 features live at stride 8.
inline FeatureBank seeded_random_bank(const std::vector<int>& channels_per_block,
                                      std::uint64_t seed) {
  if (channels_per_block.size() < 4)
    throw_config("seeded_random_bank: need at least 4 blocks (block-4 stride 8)");
  FeatureBank bank;
  bank.seed = seed;
  Rng rng(seed);
  int in = 3;
  for (int out : channels_per_block) {
    if (out <= 0) throw_config("seeded_random_bank: channel counts must be positive");
    ConvLayer layer;
    layer.out_ch = out;
    layer.in_ch = in;
    layer.w.resize(static_cast<std::size_t>(out) * in * 9);
    layer.b.assign(out, 0.0f);
    const double bound = std::sqrt(3.0 / (in * 9));  // unit-variance fan-in scaling
    for (auto& v : layer.w) v = static_cast<float>(rng.uniform(-bound, bound));
    bank.blocks.push_back({std::move(layer)});
    in = out;
  }
  bank.validate();
  return bank;
}

/// Default detection bank: 4 blocks, block-4 output 64 channels at stride 8.
inline FeatureBank default_bank(std::uint64_t seed = 17) {
  return seeded_random_bank({16, 32, 64, 64}, seed);
}

/// Five-block bank for layer sweeps; the deepest block sits at stride 16.
inline FeatureBank sweep_bank(std::uint64_t seed = 17) {
  return seeded_random_bank({16, 32, 64, 64, 64}, seed);
}

/// Forward pass through blocks 1..block_index. Downsampling happens between
/// blocks, so the result of block k is pre-pool, at stride 2^(k-1).
inline FeatureMap extract(const FeatureBank& bank, const ImageF& image, int block_index) {
  if (block_index < 1 || block_index > bank.block_count())
    throw_config("extract: block index out of range");
  if (image.channels != 3) throw_data("extract: expected a 3-channel image");
  const int stride = bank.stride_at(block_index);
  if (image.height % stride != 0 || image.width % stride != 0)
    throw_data("extract: image dimensions not divisible by the block stride");

  // to planar (c, h, w)
  int H = image.height, W = image.width;
  std::vector<float> cur(static_cast<std::size_t>(3) * H * W);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        cur[(static_cast<std::size_t>(c) * H + y) * W + x] = image.at(y, x, c);
  int ch = 3;

  for (int bi = 0; bi < block_index; ++bi) {
    if (bi > 0) {
      std::vector<float> pooled(static_cast<std::size_t>(ch) * (H / 2) * (W / 2));
      kernels::maxpool2(pooled.data(), cur.data(), 1, ch, H, W);
      cur = std::move(pooled);
      H /= 2;
      W /= 2;
    }
    for (const auto& layer : bank.blocks[bi]) {
      const int pad = layer.kh / 2;
      std::vector<float> next(static_cast<std::size_t>(layer.out_ch) * H * W);
      kernels::conv2d_forward(next.data(), cur.data(), layer.w.data(), layer.b.data(), 1,
                              layer.out_ch, layer.in_ch, H, W, layer.kh, layer.kw, H, W, 1, 1,
                              pad);
      kernels::leaky_relu_inplace(next.data(), next.size(), bank.slope);
      cur = std::move(next);
      ch = layer.out_ch;
    }
  }

  FeatureMap map;
  map.channels = ch;
  map.h = H;
  map.w = W;
  map.stride = stride;
  map.data = std::move(cur);
  return map;
}

}  // namespace mvpano::feat

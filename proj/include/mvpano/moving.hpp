#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mvpano/features.hpp"
#include "mvpano/geometry.hpp"
#include "mvpano/reprojection.hpp"
#include "mvpano/synth.hpp"

namespace mvpano::moving {

using geom::PanoramaView;
using synth::ObjectClass;

/// Paper default decision threshold for Eq. 3-style classification.
constexpr double kDefaultTau = 0.7;

/// Per-pixel moving score. raw is the stride-resolution average feature
/// difference; full is its bilinear upsample, min-max normalized to [0,1]
/// (an all-constant raw map normalizes to zeros).
struct ScoreMask {
  int h = 0, w = 0;          // raw resolution
  int H = 0, W = 0;          // full resolution
  int stride = 1;
  std::vector<float> raw;    // h x w, >= 0
  std::vector<float> full;   // H x W, [0,1]

  float raw_at(int y, int x) const { return raw[static_cast<std::size_t>(y) * w + x]; }
  float full_at(int y, int x) const { return full[static_cast<std::size_t>(y) * W + x]; }
};

/// A segmented object: its pixel set and class label.
struct ObjectInstance {
  int id = 0;
  ObjectClass cls = ObjectClass::other;
  std::vector<std::size_t> pixels;  // flat y*W + x

  std::size_t n() const { return pixels.size(); }
};

struct MovingVerdict {
  int instance_id = 0;
  double mean_score = 0;
  bool is_moving = false;
  double tau = kDefaultTau;
};

namespace detail {

/// Bilinear upsample by an integer factor with edge clamp (cell centers).
inline std::vector<float> upsample_bilinear(const std::vector<float>& src, int h, int w,
                                            int factor) {
  const int H = h * factor, W = w * factor;
  std::vector<float> out(static_cast<std::size_t>(H) * W);
  for (int y = 0; y < H; ++y) {
    double sy = (y + 0.5) / factor - 0.5;
    int y0 = static_cast<int>(std::floor(sy));
    double wy = sy - y0;
    if (y0 < 0) { y0 = 0; wy = 0; }
    if (y0 > h - 2) { y0 = h > 1 ? h - 2 : 0; wy = h > 1 ? 1.0 : 0.0; }
    int y1 = h > 1 ? y0 + 1 : y0;
    for (int x = 0; x < W; ++x) {
      double sx = (x + 0.5) / factor - 0.5;
      int x0 = static_cast<int>(std::floor(sx));
      double wx = sx - x0;
      if (x0 < 0) { x0 = 0; wx = 0; }
      if (x0 > w - 2) { x0 = w > 1 ? w - 2 : 0; wx = w > 1 ? 1.0 : 0.0; }
      int x1 = w > 1 ? x0 + 1 : x0;
      double top = (1 - wx) * src[static_cast<std::size_t>(y0) * w + x0] +
                   wx * src[static_cast<std::size_t>(y0) * w + x1];
      double bot = (1 - wx) * src[static_cast<std::size_t>(y1) * w + x0] +
                   wx * src[static_cast<std::size_t>(y1) * w + x1];
      out[static_cast<std::size_t>(y) * W + x] = static_cast<float>((1 - wy) * top + wy * bot);
    }
  }
  return out;
}

}  // namespace detail

/// Upsample a raw score grid to pixel resolution and min-max normalize it.
/// A constant raw grid (nothing stands out) normalizes to all zeros.
inline ScoreMask make_score_mask(std::vector<float> raw, int h, int w, int stride) {
  ScoreMask mask;
  mask.h = h;
  mask.w = w;
  mask.stride = stride;
  mask.H = h * stride;
  mask.W = w * stride;
  mask.full = detail::upsample_bilinear(raw, h, w, stride);
  mask.raw = std::move(raw);
  float lo = mask.full[0], hi = mask.full[0];
  for (float v : mask.full) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi > lo) {
    for (float& v : mask.full) v = (v - lo) / (hi - lo);
  } else {
    std::fill(mask.full.begin(), mask.full.end(), 0.0f);
  }
  return mask;
}

/// Average per-cell L1 feature difference between the reference frame and its
/// four guarded reprojections, upsampled back to pixel resolution and min-max
/// normalized. This is the moving-object scoring mask.
inline ScoreMask score_moving(const std::vector<PanoramaView>& sequence, int t,
                              const feat::FeatureBank& bank, int block_index,
                              double epsilon = reproj::kDefaultEpsilon) {
  const PanoramaView& ref = reproj::frame_at(sequence, t);
  auto neighbors = reproj::neighbor_set(sequence, t);
  feat::FeatureMap f_ref = feat::extract(bank, ref.rgb, block_index);

  const int h = f_ref.h, w = f_ref.w;
  std::vector<double> acc(static_cast<std::size_t>(h) * w, 0.0);
  for (const PanoramaView* nb : neighbors) {
    reproj::ReprojectedView warped = reproj::reproject_guarded(*nb, ref, epsilon);
    feat::FeatureMap f_warp = feat::extract(bank, warped.rgb, block_index);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double d = 0;
        for (int c = 0; c < f_ref.channels; ++c)
          d += std::abs(static_cast<double>(f_ref.at(c, y, x)) - f_warp.at(c, y, x));
        acc[static_cast<std::size_t>(y) * w + x] += d;
      }
  }

  std::vector<float> raw(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) raw[i] = static_cast<float>(acc[i] / 4.0);
  return make_score_mask(std::move(raw), h, w, f_ref.stride);
}

/// Mean normalized score over each instance's pixel set, compared strictly
/// against tau.
inline std::vector<MovingVerdict> classify_objects(const ScoreMask& score,
                                                   const std::vector<ObjectInstance>& instances,
                                                   double tau = kDefaultTau) {
  if (!(tau > 0.0 && tau < 1.0)) throw_config("classify_objects: tau must be in (0,1)");
  std::vector<MovingVerdict> verdicts;
  verdicts.reserve(instances.size());
  const std::size_t limit = static_cast<std::size_t>(score.H) * score.W;
  for (const auto& inst : instances) {
    if (inst.pixels.empty()) throw_data("classify_objects: instance with empty pixel set");
    double sum = 0;
    for (std::size_t p : inst.pixels) {
      if (p >= limit) throw_data("classify_objects: instance pixel out of bounds");
      sum += score.full[p];
    }
    double mean = sum / static_cast<double>(inst.pixels.size());
    verdicts.push_back({inst.id, mean, mean > tau, tau});
  }
  return verdicts;
}

/// Union of the pixel sets of instances judged moving: the hole mask B.
inline MaskU8 moving_mask(const std::vector<MovingVerdict>& verdicts,
                          const std::vector<ObjectInstance>& instances, int H, int W) {
  MaskU8 mask(H, W, 1, 0);
  for (const auto& verdict : verdicts) {
    const ObjectInstance* inst = nullptr;
    for (const auto& candidate : instances)
      if (candidate.id == verdict.instance_id) { inst = &candidate; break; }
    if (!inst) throw_data("moving_mask: verdict id has no matching instance");
    if (!verdict.is_moving) continue;
    for (std::size_t p : inst->pixels) {
      if (p >= mask.data.size()) throw_data("moving_mask: instance pixel out of bounds");
      mask.data[p] = 1;
    }
  }
  return mask;
}

/// Instances from a labeled raster (0 = background, ids > 0).
inline std::vector<ObjectInstance> instances_from_raster(
    const MaskU8& raster, const std::vector<std::pair<int, ObjectClass>>& id_classes = {}) {
  std::vector<ObjectInstance> out;
  auto find = [&](int id) -> ObjectInstance* {
    for (auto& inst : out)
      if (inst.id == id) return &inst;
    return nullptr;
  };
  for (std::size_t i = 0; i < raster.data.size(); ++i) {
    int id = raster.data[i];
    if (id == 0) continue;
    ObjectInstance* inst = find(id);
    if (!inst) {
      ObjectInstance fresh;
      fresh.id = id;
      for (const auto& [cid, cls] : id_classes)
        if (cid == id) fresh.cls = cls;
      out.push_back(std::move(fresh));
      inst = &out.back();
    }
    inst->pixels.push_back(i);
  }
  return out;
}

/// Fallback instance extraction when only a semantic class raster exists:
/// 4-connected components, one instance per component.
inline std::vector<ObjectInstance> instances_from_semantic(const MaskU8& class_raster) {
  const int H = class_raster.height, W = class_raster.width;
  std::vector<int> comp(static_cast<std::size_t>(H) * W, 0);
  std::vector<ObjectInstance> out;
  int next_id = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < comp.size(); ++start) {
    if (comp[start] != 0 || class_raster.data[start] == 0) continue;
    const std::uint8_t cls = class_raster.data[start];
    ++next_id;
    ObjectInstance inst;
    inst.id = next_id;
    inst.cls = static_cast<ObjectClass>(cls % 5);
    stack.assign(1, start);
    comp[start] = next_id;
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      inst.pixels.push_back(p);
      int y = static_cast<int>(p / W), x = static_cast<int>(p % W);
      const int dy[4] = {-1, 1, 0, 0}, dx[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        int ny = y + dy[k], nx = x + dx[k];
        if (ny < 0 || ny >= H || nx < 0 || nx >= W) continue;
        std::size_t q = static_cast<std::size_t>(ny) * W + nx;
        if (comp[q] == 0 && class_raster.data[q] == cls) {
          comp[q] = next_id;
          stack.push_back(q);
        }
      }
    }
    std::sort(inst.pixels.begin(), inst.pixels.end());
    out.push_back(std::move(inst));
  }
  return out;
}

/// Object-level accuracy of moving/static verdicts per feature block, over a
/// labeled scene suite. Rows: block index; columns: tau values.
struct BlockSweepReport {
  std::vector<int> blocks;
  std::vector<double> taus;
  std::vector<std::vector<double>> accuracy;  // [block][tau]
  int total_instances = 0;
};

inline std::vector<ObjectInstance> oracle_instances(const synth::RenderedSequence& seq, int frame) {
  std::vector<std::pair<int, ObjectClass>> id_classes;
  for (std::size_t b = 0; b < seq.classes.size(); ++b)
    id_classes.push_back({static_cast<int>(b) + 1, seq.classes[b]});
  return instances_from_raster(seq.instance_masks[frame], id_classes);
}

inline BlockSweepReport block_sweep(const std::vector<synth::RenderedSequence>& suite,
                                    const feat::FeatureBank& bank, const std::vector<double>& taus,
                                    const std::vector<int>& blocks,
                                    double epsilon = reproj::kDefaultEpsilon) {
  BlockSweepReport report;
  report.blocks = blocks;
  report.taus = taus;
  report.accuracy.assign(blocks.size(), std::vector<double>(taus.size(), 0.0));
  std::vector<std::vector<int>> correct(blocks.size(), std::vector<int>(taus.size(), 0));
  int total = 0;
  for (const auto& seq : suite) {
    const int t = seq.spec.frame_count / 2;
    auto instances = oracle_instances(seq, t);
    total += static_cast<int>(instances.size());
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      ScoreMask score = score_moving(seq.views, t, bank, blocks[bi], epsilon);
      for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        auto verdicts = classify_objects(score, instances, taus[ti]);
        for (const auto& verdict : verdicts) {
          bool truth = seq.motion_labels[verdict.instance_id - 1];
          if (verdict.is_moving == truth) ++correct[bi][ti];
        }
      }
    }
  }
  report.total_instances = total;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi)
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
      report.accuracy[bi][ti] = total > 0 ? static_cast<double>(correct[bi][ti]) / total : 0.0;
  return report;
}

}  // namespace mvpano::moving

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "mvpano/geometry.hpp"
#include "mvpano/image.hpp"

namespace mvpano::reproj {

using geom::PanoramaView;
using geom::Vec3;

/// Default world-space consistency threshold, meters. Pose error in the data
/// this models is below 2 cm, so 0.2 m keeps a 10x margin.
constexpr double kDefaultEpsilon = 0.2;

/// A neighbor view warped into the reference viewpoint. Where valid is false
/// the color is the reference image's own pixel (the guarded fallback).
struct ReprojectedView {
  ImageF rgb;
  MaskU8 valid;
  int source_index = 0;
  int target_index = 0;
};

/// Reprojection restricted to hole pixels, with the source view's own moving
/// objects rejected. Invalid pixels are zero: holes carry no target content.
struct RemovalReprojection {
  ImageF rgb;
  MaskU8 valid;
  MaskU8 restricted_to;  // the hole mask this was computed for
  int source_index = 0;
  int target_index = 0;
};

namespace detail {

/// Shared per-pixel warp: projects the destination pixel's world point into
/// the source view and applies the depth-consistency test. On acceptance
/// fills `color` with the bilinear source sample.
/// `reject_mask`, when non-null, rejects samples whose bilinear footprint
/// touches a masked source pixel.
inline bool warp_pixel(const PanoramaView& src, const PanoramaView& dst, int u, int v,
                       double epsilon, const MaskU8* reject_mask, float color[3]) {
  if (!dst.depth_valid(u, v)) return false;
  Vec3 p_t = *geom::pixel_to_world(dst, u, v);
  Vec3 cam = src.pose.to_camera(p_t);
  if (cam.norm() < 1e-12) return false;  // degenerate: point at the source camera
  geom::PixelProjection proj = geom::world_to_pixel(src, p_t);
  int su = geom::wrap_column(src.grid, proj.u);
  int sv = geom::clamp_row(src.grid, proj.v);
  if (!src.depth_valid(su, sv)) return false;
  Vec3 p_src = *geom::pixel_to_world(src, su, sv);
  Vec3 diff = p_t - p_src;
  if (!(diff.norm() < epsilon)) return false;
  if (reject_mask) {
    // Footprint of the bilinear sample: both rows and both wrapped columns.
    double x = proj.u - 0.5, y = proj.v - 0.5;
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    if (y0 < 0) y0 = 0;
    if (y0 > src.grid.height - 2) y0 = src.grid.height - 2;
    auto wrap = [&](int c) {
      c %= src.grid.width;
      return c < 0 ? c + src.grid.width : c;
    };
    int xs[2] = {wrap(x0), wrap(x0 + 1)};
    for (int ry = 0; ry < 2; ++ry)
      for (int rx = 0; rx < 2; ++rx)
        if (reject_mask->at(y0 + ry, xs[rx]) != 0) return false;
    if (reject_mask->at(sv, su) != 0) return false;
  }
  for (int c = 0; c < 3; ++c) color[c] = geom::sample_bilinear(src.rgb, proj.u, proj.v, c);
  return true;
}

}  // namespace detail

/// Warps `src` into the viewpoint of `dst` with the depth-consistency guard:
/// a sample is accepted only if the destination pixel's world point and the
/// world point stored at the corresponding source pixel are within epsilon.
/// Rejected pixels fall back to the destination image and are marked invalid.
inline ReprojectedView reproject_guarded(const PanoramaView& src, const PanoramaView& dst,
                                         double epsilon = kDefaultEpsilon) {
  if (src.grid.width != dst.grid.width || src.grid.height != dst.grid.height)
    throw_data("reproject_guarded: views have mismatched grids");
  if (!(epsilon > 0)) throw_config("reproject_guarded: epsilon must be positive");
  const int W = dst.grid.width, H = dst.grid.height;
  ReprojectedView out;
  out.rgb = ImageF(H, W, 3);
  out.valid = MaskU8(H, W, 1, 0);
  out.source_index = src.frame_index;
  out.target_index = dst.frame_index;
  for (int v = 0; v < H; ++v) {
    for (int u = 0; u < W; ++u) {
      float color[3];
      if (detail::warp_pixel(src, dst, u, v, epsilon, nullptr, color)) {
        out.valid.at(v, u) = 1;
        for (int c = 0; c < 3; ++c) out.rgb.at(v, u, c) = color[c];
      } else {
        for (int c = 0; c < 3; ++c) out.rgb.at(v, u, c) = dst.rgb.at(v, u, c);
      }
    }
  }
  return out;
}

/// Same warp restricted to hole pixels, used to feed the inpainting stage.
/// Samples landing on the source view's moving objects are rejected, and
/// rejected or out-of-hole pixels are zero rather than target content.
inline RemovalReprojection reproject_with_removal(const PanoramaView& src, const PanoramaView& dst,
                                                  double epsilon, const MaskU8& src_moving_mask,
                                                  const MaskU8& hole_mask) {
  if (src.grid.width != dst.grid.width || src.grid.height != dst.grid.height)
    throw_data("reproject_with_removal: views have mismatched grids");
  if (!(epsilon > 0)) throw_config("reproject_with_removal: epsilon must be positive");
  const int W = dst.grid.width, H = dst.grid.height;
  if (src_moving_mask.height != H || src_moving_mask.width != W)
    throw_data("reproject_with_removal: moving mask does not match grid");
  if (hole_mask.height != H || hole_mask.width != W)
    throw_data("reproject_with_removal: hole mask does not match grid");
  RemovalReprojection out;
  out.rgb = ImageF(H, W, 3);
  out.valid = MaskU8(H, W, 1, 0);
  out.restricted_to = hole_mask;
  out.source_index = src.frame_index;
  out.target_index = dst.frame_index;
  for (int v = 0; v < H; ++v) {
    for (int u = 0; u < W; ++u) {
      if (hole_mask.at(v, u) == 0) continue;
      float color[3];
      if (detail::warp_pixel(src, dst, u, v, epsilon, &src_moving_mask, color)) {
        out.valid.at(v, u) = 1;
        for (int c = 0; c < 3; ++c) out.rgb.at(v, u, c) = color[c];
      }
    }
  }
  return out;
}

/// The four neighbor frames used throughout: t-2, t-1, t+1, t+2, in that order.
/// Sequence ends are not padded; a missing frame is a data error.
inline std::array<int, 4> neighbor_offsets() { return {-2, -1, 1, 2}; }

inline std::array<const PanoramaView*, 4> neighbor_set(const std::vector<PanoramaView>& sequence,
                                                       int t) {
  std::array<const PanoramaView*, 4> out{};
  int o = 0;
  for (int off : neighbor_offsets()) {
    const PanoramaView* found = nullptr;
    for (const auto& view : sequence)
      if (view.frame_index == t + off) { found = &view; break; }
    if (!found)
      throw_data("neighbor_set: frame " + std::to_string(t + off) +
                 " missing from the sequence");
    out[o++] = found;
  }
  return out;
}

inline const PanoramaView& frame_at(const std::vector<PanoramaView>& sequence, int t) {
  for (const auto& view : sequence)
    if (view.frame_index == t) return view;
  throw_data("frame_at: frame " + std::to_string(t) + " missing from the sequence");
}

}  // namespace mvpano::reproj

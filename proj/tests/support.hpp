#pragma once

#include <cmath>

#include "mvpano/geometry.hpp"
#include "mvpano/rng.hpp"
#include "mvpano/synth.hpp"

namespace testsup {

using mvpano::Rng;
using mvpano::geom::EquirectGrid;
using mvpano::geom::PanoramaView;
using mvpano::geom::Pose;
using mvpano::geom::Quat;
using mvpano::geom::Vec3;

inline Quat random_rotation(Rng& rng) {
  Vec3 axis{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  if (axis.norm() < 1e-6) axis = {0, 0, 1};
  return Quat::from_axis_angle(axis, rng.uniform(-3.0, 3.0));
}

inline Pose random_pose(Rng& rng, double span = 10.0) {
  return {{rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(0.5, span)},
          random_rotation(rng)};
}

/// View with random pose and random positive depths; rgb is an arbitrary
/// smooth function of the pixel so color comparisons are meaningful.
inline PanoramaView random_view(Rng& rng, EquirectGrid grid, int frame_index = 0) {
  PanoramaView view;
  view.frame_index = frame_index;
  view.grid = grid;
  view.pose = random_pose(rng);
  view.rgb = mvpano::ImageF(grid.height, grid.width, 3);
  view.depth = mvpano::DepthMap(grid.height, grid.width, 1);
  for (int v = 0; v < grid.height; ++v)
    for (int u = 0; u < grid.width; ++u) {
      view.depth.at(v, u) = rng.uniform(1.0, 30.0);
      for (int c = 0; c < 3; ++c)
        view.rgb.at(v, u, c) = static_cast<float>(
            0.5 + 0.5 * std::sin(0.3 * u + 0.7 * v + 1.3 * c));
    }
  return view;
}

/// Distance from a point to the nearest scene surface (ground plane or any
/// box face) of a static+moving scene at a given frame.
inline double distance_to_surface(const mvpano::synth::SceneSpec& spec, int frame, const Vec3& p,
                                  bool include_moving) {
  double best = std::abs(p.z);  // ground plane z=0
  for (const auto& b : spec.boxes) {
    if (!include_moving && b.moving()) continue;
    Vec3 lo = b.lo_at(frame), hi = b.hi_at(frame);
    // distance to the box SURFACE: |sdf| of the AABB
    double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
    double outside = std::sqrt(dx * dx + dy * dy + dz * dz);
    double d;
    if (outside > 0) {
      d = outside;
    } else {
      double inside = std::min({p.x - lo.x, hi.x - p.x, p.y - lo.y, hi.y - p.y,
                                p.z - lo.z, hi.z - p.z});
      d = inside;
    }
    best = std::min(best, d);
  }
  return best;
}

}  // namespace testsup

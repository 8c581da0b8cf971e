#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvpano/geometry.hpp"
#include "mvpano/image.hpp"
#include "mvpano/rng.hpp"

namespace mvpano::synth {

using geom::EquirectGrid;
using geom::PanoramaView;
using geom::Pose;
using geom::Vec3;

enum class ObjectClass : int {
  pedestrian = 0,
  two_wheeler = 1,
  motorized_vehicle = 2,
  recording_vehicle = 3,
  other = 4,
};

inline const char* to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::pedestrian: return "pedestrian";
    case ObjectClass::two_wheeler: return "two-wheeler";
    case ObjectClass::motorized_vehicle: return "motorized-vehicle";
    case ObjectClass::recording_vehicle: return "recording-vehicle";
    default: return "other";
  }
}

inline ObjectClass object_class_from_string(const std::string& s) {
  if (s == "pedestrian") return ObjectClass::pedestrian;
  if (s == "two-wheeler") return ObjectClass::two_wheeler;
  if (s == "motorized-vehicle") return ObjectClass::motorized_vehicle;
  if (s == "recording-vehicle") return ObjectClass::recording_vehicle;
  if (s == "other") return ObjectClass::other;
  throw_data("unknown object class: " + s);
}

/// Axis-aligned box resting in the scene. velocity is meters per frame;
/// velocity == 0 defines the static label.
struct BoxSpec {
  Vec3 center;             // at frame 0
  Vec3 size;               // full extents, meters
  Vec3 albedo;             // rgb in (0,1]
  Vec3 velocity{0, 0, 0};  // m/frame
  ObjectClass cls = ObjectClass::other;

  bool moving() const { return velocity.x != 0 || velocity.y != 0 || velocity.z != 0; }
  Vec3 center_at(int frame) const { return center + static_cast<double>(frame) * velocity; }
  Vec3 lo_at(int frame) const { return center_at(frame) - 0.5 * size; }
  Vec3 hi_at(int frame) const { return center_at(frame) + 0.5 * size; }
};

/// Scene recipe: checkered ground plane at z=0, sky above, boxes, and a
/// straight capture path with one panorama every `spacing` meters.
struct SceneSpec {
  EquirectGrid grid{128, 64};
  Vec3 path_start{0, 0, 2.0};
  Vec3 path_direction{0, 1, 0};  // horizontal unit vector
  double spacing = 5.0;          // meters between captures
  int frame_count = 5;
  std::vector<BoxSpec> boxes;
  std::uint64_t seed = 0;

  Vec3 ground_albedo_a{0.62, 0.60, 0.55};
  Vec3 ground_albedo_b{0.33, 0.32, 0.28};
  Vec3 sky_color{0.60, 0.76, 0.94};
  double checker_period = 2.5;  // meters

  Vec3 camera_position(int frame) const {
    return path_start + spacing * static_cast<double>(frame) * path_direction;
  }

  void validate() const {
    if (frame_count < 1) throw_config("SceneSpec: frame_count must be >= 1");
    if (spacing <= 0) throw_config("SceneSpec: spacing must be positive");
    if (path_start.z <= 0) throw_config("SceneSpec: camera must be above the ground plane");
    if (path_direction.z != 0 || std::abs(path_direction.norm() - 1.0) > 1e-9)
      throw_config("SceneSpec: path_direction must be a horizontal unit vector");
    if (checker_period <= 0) throw_config("SceneSpec: checker_period must be positive");
    for (const auto& b : boxes) {
      if (b.size.x <= 0 || b.size.y <= 0 || b.size.z <= 0)
        throw_config("SceneSpec: box size must be positive");
      for (int k = 0; k < frame_count; ++k) {
        Vec3 cam = camera_position(k);
        Vec3 lo = b.lo_at(k), hi = b.hi_at(k);
        const double clearance = 0.3;
        if (cam.x > lo.x - clearance && cam.x < hi.x + clearance &&
            cam.y > lo.y - clearance && cam.y < hi.y + clearance &&
            cam.z > lo.z - clearance && cam.z < hi.z + clearance)
          throw_config("SceneSpec: box intersects the camera path");
      }
    }
  }
};

/// Exact ray / axis-aligned box intersection (slab test). Returns the entry
/// range and the axis (0..2) + side (+1/-1) of the face hit, or nothing.
struct BoxHit {
  double t = 0;
  int axis = 0;
  int side = 1;
};

inline std::optional<BoxHit> intersect_box(const Vec3& origin, const Vec3& dir,
                                           const Vec3& lo, const Vec3& hi) {
  double tmin = -1e300, tmax = 1e300;
  int axis_min = -1, side_min = 0;
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double l[3] = {lo.x, lo.y, lo.z};
  const double h[3] = {hi.x, hi.y, hi.z};
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < l[a] || o[a] > h[a]) return std::nullopt;
      continue;
    }
    double t1 = (l[a] - o[a]) / d[a];
    double t2 = (h[a] - o[a]) / d[a];
    int side = -1;  // entering through the low face
    if (t1 > t2) { std::swap(t1, t2); side = 1; }
    if (t1 > tmin) { tmin = t1; axis_min = a; side_min = side; }
    if (t2 < tmax) tmax = t2;
    if (tmin > tmax) return std::nullopt;
  }
  if (tmax <= 1e-9 || axis_min < 0) return std::nullopt;
  if (tmin <= 1e-9) return std::nullopt;  // origin inside the box: treat as miss
  return BoxHit{tmin, axis_min, side_min};
}

/// Ray / ground-plane (z=0) intersection range, or nothing.
inline std::optional<double> intersect_ground(const Vec3& origin, const Vec3& dir) {
  if (origin.z <= 0 || dir.z >= 0) return std::nullopt;
  return -origin.z / dir.z;
}

/// Nearest scene hit along a ray. instance -1 = ground, -2 = sky, >= 0 = box index.
struct SceneHit {
  double range = -1;
  int instance = -2;
  int face_axis = 0;
  int face_side = 1;
};

/// Casts against the ground plane plus the selected box set.
/// include_moving=false gives the static world the depth maps are built from.
inline SceneHit trace_ray(const SceneSpec& spec, int frame, const Vec3& origin,
                          const Vec3& dir, bool include_moving) {
  SceneHit hit;
  if (auto tg = intersect_ground(origin, dir)) {
    hit.range = *tg;
    hit.instance = -1;
  }
  for (std::size_t i = 0; i < spec.boxes.size(); ++i) {
    const auto& b = spec.boxes[i];
    if (!include_moving && b.moving()) continue;
    auto bh = intersect_box(origin, dir, b.lo_at(frame), b.hi_at(frame));
    if (bh && (hit.range < 0 || bh->t < hit.range)) {
      hit.range = bh->t;
      hit.instance = static_cast<int>(i);
      hit.face_axis = bh->axis;
      hit.face_side = bh->side;
    }
  }
  return hit;
}

/// Brightness falloff with distance from the world origin. Anchoring the
/// shading in world space keeps surface colors view-independent, which the
/// multi-view consistency tests rely on.
inline double distance_shade(double world_distance) {
  return 0.55 + 0.45 / (1.0 + 0.04 * world_distance);
}

inline double face_shade(int axis, int side) {
  if (axis == 2) return side > 0 ? 1.0 : 0.62;
  return axis == 0 ? 0.76 : 0.90;
}

inline Vec3 shade_hit(const SceneSpec& spec, const SceneHit& hit, const Vec3& origin,
                      const Vec3& dir) {
  if (hit.instance == -2) return spec.sky_color;
  Vec3 p = origin + hit.range * dir;
  double s = distance_shade(p.norm());
  if (hit.instance == -1) {
    long cx = static_cast<long>(std::floor(p.x / spec.checker_period));
    long cy = static_cast<long>(std::floor(p.y / spec.checker_period));
    Vec3 a = ((cx + cy) % 2 + 2) % 2 == 0 ? spec.ground_albedo_a : spec.ground_albedo_b;
    return s * a;
  }
  return (s * face_shade(hit.face_axis, hit.face_side)) * spec.boxes[hit.instance].albedo;
}

/// Ground-truth render of one capture sequence. Depth maps come from the
/// static geometry only (the meshed-LiDAR analog: moving objects are absent
/// from depth), while rgb shows the full scene. clean_rgb is the static-world
/// plate used as inpainting ground truth.
struct RenderedSequence {
  std::vector<PanoramaView> views;
  std::vector<ImageF> clean_rgb;        // per frame, static world
  std::vector<MaskU8> instance_masks;   // per frame; 0 = background, i+1 = box i
  std::vector<bool> motion_labels;      // per box
  std::vector<ObjectClass> classes;     // per box
  SceneSpec spec;

  MaskU8 box_mask(int frame, int box_index) const {
    const MaskU8& inst = instance_masks[frame];
    MaskU8 m(inst.height, inst.width, 1, 0);
    for (std::size_t i = 0; i < inst.data.size(); ++i)
      m.data[i] = inst.data[i] == box_index + 1 ? 1 : 0;
    return m;
  }

  /// Union of all moving-box pixels in one frame.
  MaskU8 moving_mask_oracle(int frame) const {
    const MaskU8& inst = instance_masks[frame];
    MaskU8 m(inst.height, inst.width, 1, 0);
    for (std::size_t i = 0; i < inst.data.size(); ++i) {
      int id = inst.data[i];
      if (id > 0 && motion_labels[id - 1]) m.data[i] = 1;
    }
    return m;
  }
};

inline RenderedSequence generate(const SceneSpec& spec) {
  spec.validate();
  if (spec.boxes.size() > 254) throw_config("generate: too many boxes for 8-bit instance ids");
  RenderedSequence seq;
  seq.spec = spec;
  for (const auto& b : spec.boxes) {
    seq.motion_labels.push_back(b.moving());
    seq.classes.push_back(b.cls);
  }
  const int W = spec.grid.width, H = spec.grid.height;
  for (int k = 0; k < spec.frame_count; ++k) {
    PanoramaView view;
    view.frame_index = k;
    view.grid = spec.grid;
    view.pose = Pose{spec.camera_position(k), {1, 0, 0, 0}};
    view.rgb = ImageF(H, W, 3);
    view.depth = DepthMap(H, W, 1);
    ImageF clean(H, W, 3);
    MaskU8 inst(H, W, 1, 0);
    for (int v = 0; v < H; ++v) {
      for (int u = 0; u < W; ++u) {
        Vec3 dir = geom::pixel_to_ray(spec.grid, u, v);
        Vec3 origin = view.pose.position;
        SceneHit full = trace_ray(spec, k, origin, dir, true);
        SceneHit stat = trace_ray(spec, k, origin, dir, false);
        Vec3 c = shade_hit(spec, full, origin, dir);
        Vec3 cc = shade_hit(spec, stat, origin, dir);
        for (int ch = 0; ch < 3; ++ch) {
          view.rgb.at(v, u, ch) = static_cast<float>(ch == 0 ? c.x : ch == 1 ? c.y : c.z);
          clean.at(v, u, ch) = static_cast<float>(ch == 0 ? cc.x : ch == 1 ? cc.y : cc.z);
        }
        view.depth.at(v, u) = stat.instance == -2 ? -1.0 : stat.range;
        inst.at(v, u) = full.instance >= 0 ? static_cast<std::uint8_t>(full.instance + 1) : 0;
      }
    }
    seq.views.push_back(std::move(view));
    seq.clean_rgb.push_back(std::move(clean));
    seq.instance_masks.push_back(std::move(inst));
  }
  return seq;
}

namespace detail {

inline ObjectClass random_class(Rng& rng) {
  switch (rng.range(0, 3)) {
    case 0: return ObjectClass::pedestrian;
    case 1: return ObjectClass::two_wheeler;
    case 2: return ObjectClass::motorized_vehicle;
    default: return ObjectClass::other;
  }
}

inline Vec3 random_albedo(Rng& rng) {
  return {rng.uniform(0.12, 0.95), rng.uniform(0.12, 0.95), rng.uniform(0.12, 0.95)};
}

/// Places a box beside the path (which runs along +y through x=0) so that it
/// never crosses the camera line over the sequence. Sizes and distances keep
/// objects at least a couple of stride-8 feature cells wide in every view.
inline BoxSpec random_box(Rng& rng, bool moving, const SceneSpec& spec) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    BoxSpec b;
    double side = rng.coin() ? 1.0 : -1.0;
    double sx = rng.uniform(2.0, 3.2);
    double sy = rng.uniform(2.0, 3.2);
    double sz = rng.uniform(2.2, 3.2);  // tall, but below the 4 m camera line
    b.size = {sx, sy, sz};
    b.center = {side * rng.uniform(2.6, 4.6), rng.uniform(3.0, 9.0), sz * 0.5};
    b.albedo = random_albedo(rng);
    b.cls = random_class(rng);
    if (moving) {
      double speed = rng.uniform(0.5, 3.0);
      double heading = rng.coin() ? 1.0 : -1.0;           // along the road
      double drift = rng.uniform(-0.08, 0.08) * speed;    // slight lateral drift
      b.velocity = {drift * side, heading * speed, 0.0};
    }
    SceneSpec probe = spec;
    probe.boxes = {b};
    try {
      probe.validate();
    } catch (const Error&) {
      continue;
    }
    return b;
  }
  throw_config("random_box: could not place a box off the camera path");
}

}  // namespace detail

/// Deterministic family of labeled scenes: 1-3 moving and 1-3 static boxes
/// each, randomized sizes, positions and albedos. The grid default keeps
/// objects several stride-8 feature cells across; the raised camera keeps
/// tall objects backed by ground rather than sky in every view.
inline std::vector<SceneSpec> standard_suite_specs(std::uint64_t seed, int count = 50,
                                                   EquirectGrid grid = EquirectGrid(512, 256)) {
  std::vector<SceneSpec> specs;
  specs.reserve(count);
  Rng root(seed);
  for (int s = 0; s < count; ++s) {
    Rng rng = root.fork(static_cast<std::uint64_t>(s));
    SceneSpec spec;
    spec.grid = grid;
    spec.path_start = {0, 0, 4.0};
    spec.seed = seed ^ static_cast<std::uint64_t>(s);
    int n_moving = rng.range(1, 3);
    int n_static = rng.range(1, 3);
    for (int i = 0; i < n_moving; ++i) spec.boxes.push_back(detail::random_box(rng, true, spec));
    for (int i = 0; i < n_static; ++i) spec.boxes.push_back(detail::random_box(rng, false, spec));
    spec.validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

inline std::vector<RenderedSequence> standard_suite(std::uint64_t seed, int count = 50,
                                                    EquirectGrid grid = EquirectGrid(512, 256)) {
  std::vector<RenderedSequence> out;
  for (const auto& spec : standard_suite_specs(seed, count, grid)) out.push_back(generate(spec));
  return out;
}

}  // namespace mvpano::synth

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "mvpano/error.hpp"
#include "mvpano/image.hpp"

namespace mvpano::geom {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0.0) throw_numeric("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Unit quaternion (w, x, y, z), camera-to-world rotation.
struct Quat {
  double w = 1, x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    if (n == 0.0) throw_numeric("Quat::normalized: zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  Quat operator*(const Quat& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }

  Vec3 rotate(const Vec3& v) const {
    // q v q* expanded via the cross-product form
    Vec3 u{x, y, z};
    Vec3 t = 2.0 * u.cross(v);
    return v + w * t + u.cross(t);
  }

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    Vec3 a = axis.normalized();
    double h = 0.5 * angle;
    double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }
};

/// Rigid camera pose: position in meters (world frame) plus camera-to-world rotation.
struct Pose {
  Vec3 position;
  Quat rotation;

  static Pose identity() { return {{0, 0, 0}, {1, 0, 0, 0}}; }

  void validate() const {
    if (std::abs(rotation.norm() - 1.0) > 1e-9)
      throw_data("Pose: quaternion is not unit norm");
  }

  Pose inverse() const {
    Quat rinv = rotation.conjugate();
    return {-rinv.rotate(position), rinv};
  }

  Pose compose(const Pose& rhs) const {
    // this ∘ rhs: applies rhs first, then this
    return {position + rotation.rotate(rhs.position), rotation * rhs.rotation};
  }

  Vec3 to_world(const Vec3& cam) const { return position + rotation.rotate(cam); }
  Vec3 to_camera(const Vec3& world) const { return rotation.conjugate().rotate(world - position); }
};

/// Full 360°x180° equirectangular pixel grid. Columns map linearly to azimuth,
/// rows to elevation; width must be exactly twice the height.
struct EquirectGrid {
  int width = 0;
  int height = 0;

  EquirectGrid() = default;
  EquirectGrid(int w, int h) : width(w), height(h) {
    if (h < 2 || w != 2 * h || w % 2 != 0 || h % 2 != 0)
      throw_config("EquirectGrid: require even width = 2 x height, height >= 2");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// One capture: RGB, per-pixel depth (Euclidean range along the ray, -1 = sky),
/// pose and frame index.
struct PanoramaView {
  int frame_index = 0;
  Pose pose;
  EquirectGrid grid;
  ImageF rgb;      // height x width x 3, values in [0,1]
  DepthMap depth;  // height x width, meters; -1 where invalid

  bool depth_valid(int u, int v) const { return depth.at(v, u) > 0.0; }

  void validate() const {
    pose.validate();
    if (rgb.height != grid.height || rgb.width != grid.width || rgb.channels != 3)
      throw_data("PanoramaView: rgb dimensions do not match grid");
    if (depth.height != grid.height || depth.width != grid.width || depth.channels != 1)
      throw_data("PanoramaView: depth dimensions do not match grid");
    for (float v : rgb.data)
      if (!(v >= 0.0f && v <= 1.0f)) throw_data("PanoramaView: rgb value outside [0,1]");
    for (double d : depth.data)
      if (!(d > 0.0 || d == -1.0)) throw_data("PanoramaView: depth must be > 0 or -1");
  }
};

constexpr double kPi = 3.14159265358979323846;

/// Ray direction for a continuous pixel coordinate (pixel center of (u,v) is
/// (u+0.5, v+0.5)). Convention: azimuth phi = 2*pi*uc/W - pi measured from +y
/// toward +x, elevation theta = pi/2 - pi*vc/H; right-handed, z-up, y-forward.
inline Vec3 ray_direction(const EquirectGrid& grid, double uc, double vc) {
  double phi = 2.0 * kPi * uc / grid.width - kPi;
  double theta = kPi / 2.0 - kPi * vc / grid.height;
  double ct = std::cos(theta);
  return {ct * std::sin(phi), ct * std::cos(phi), std::sin(theta)};
}

/// Unit ray through the center of integer pixel (u,v), camera frame.
inline Vec3 pixel_to_ray(const EquirectGrid& grid, int u, int v) {
  if (u < 0 || u >= grid.width || v < 0 || v >= grid.height)
    throw_config("pixel_to_ray: pixel out of range");
  return ray_direction(grid, u + 0.5, v + 0.5);
}

/// World point seen at pixel (u,v), or nothing where depth is invalid.
inline std::optional<Vec3> pixel_to_world(const PanoramaView& view, int u, int v) {
  if (u < 0 || u >= view.grid.width || v < 0 || v >= view.grid.height)
    throw_config("pixel_to_world: pixel out of range");
  double d = view.depth.at(v, u);
  if (!(d > 0.0)) return std::nullopt;
  return view.pose.position + d * view.pose.rotation.rotate(pixel_to_ray(view.grid, u, v));
}

struct PixelProjection {
  double u = 0;      // continuous column in (0, W]
  double v = 0;      // continuous row in [0, H]
  double range = 0;  // ||p - camera position||, meters
};

/// Continuous pixel coordinates of a world point under the same convention.
/// The azimuth seam is at +-pi behind the camera; u wraps there.
inline PixelProjection world_to_pixel(const PanoramaView& view, const Vec3& p) {
  Vec3 cam = view.pose.to_camera(p);
  double range = cam.norm();
  if (range < 1e-12) throw_numeric("world_to_pixel: point coincides with camera center");
  Vec3 d = {cam.x / range, cam.y / range, cam.z / range};
  double theta = std::asin(std::clamp(d.z, -1.0, 1.0));
  double phi = std::atan2(d.x, d.y);
  double uc = (phi + kPi) * view.grid.width / (2.0 * kPi);
  double vc = (kPi / 2.0 - theta) * view.grid.height / kPi;
  return {uc, vc, range};
}

/// Index of the pixel containing a continuous column coordinate, wrapping azimuth.
inline int wrap_column(const EquirectGrid& grid, double uc) {
  int u = static_cast<int>(std::floor(uc));
  u %= grid.width;
  if (u < 0) u += grid.width;
  return u;
}

/// Index of the pixel containing a continuous row coordinate, clamped at the poles.
inline int clamp_row(const EquirectGrid& grid, double vc) {
  int v = static_cast<int>(std::floor(vc));
  return std::clamp(v, 0, grid.height - 1);
}

/// Bilinear RGB sample at a continuous pixel coordinate. Columns wrap around
/// the azimuth seam, rows clamp at the poles. Returns one channel.
inline float sample_bilinear(const ImageF& img, double uc, double vc, int ch) {
  double x = uc - 0.5;
  double y = vc - 0.5;
  int x0 = static_cast<int>(std::floor(x));
  double wx = x - x0;
  int y0 = static_cast<int>(std::floor(y));
  double wy = y - y0;
  if (y0 < 0) { y0 = 0; wy = 0.0; }
  if (y0 > img.height - 2) { y0 = img.height - 2; wy = 1.0; }
  auto wrap = [&](int u) {
    u %= img.width;
    return u < 0 ? u + img.width : u;
  };
  int xa = wrap(x0), xb = wrap(x0 + 1);
  double top = (1.0 - wx) * img.at(y0, xa, ch) + wx * img.at(y0, xb, ch);
  double bot = (1.0 - wx) * img.at(y0 + 1, xa, ch) + wx * img.at(y0 + 1, xb, ch);
  return static_cast<float>((1.0 - wy) * top + wy * bot);
}

}  // namespace mvpano::geom

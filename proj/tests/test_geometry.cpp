#include <catch2/catch_amalgamated.hpp>

#include "mvpano/geometry.hpp"
#include "mvpano/synth.hpp"
#include "support.hpp"

using namespace mvpano;
using namespace mvpano::geom;
using testsup::random_pose;
using testsup::random_rotation;
using testsup::random_view;

TEST_CASE("equirect grid invariants", "[geometry]") {
  CHECK_NOTHROW(EquirectGrid(16, 8));
  CHECK_THROWS_AS(EquirectGrid(16, 9), Error);   // not 2:1
  CHECK_THROWS_AS(EquirectGrid(10, 5), Error);   // odd height
  CHECK_THROWS_AS(EquirectGrid(2, 1), Error);    // too small
}

TEST_CASE("pixel_to_ray follows the stated convention", "[geometry]") {
  EquirectGrid grid(4, 2);
  Vec3 d = pixel_to_ray(grid, 1, 0);
  CHECK(d.x == Catch::Approx(-0.5).margin(1e-5));
  CHECK(d.y == Catch::Approx(0.5).margin(1e-5));
  CHECK(d.z == Catch::Approx(0.70711).margin(1e-5));

  // center column, middle row (continuous coordinates): straight ahead +y
  EquirectGrid big(64, 32);
  Vec3 fwd = ray_direction(big, big.width / 2.0, big.height / 2.0);
  CHECK(fwd.x == Catch::Approx(0.0).margin(1e-12));
  CHECK(fwd.z == Catch::Approx(0.0).margin(1e-12));
  CHECK(fwd.y == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(pixel_to_ray(grid, 4, 0), Error);
  CHECK_THROWS_AS(pixel_to_ray(grid, 0, -1), Error);
}

TEST_CASE("pixel_to_ray is unit norm and round trips through angles", "[geometry]") {
  EquirectGrid grid(16, 8);
  for (int v = 0; v < grid.height; ++v) {
    for (int u = 0; u < grid.width; ++u) {
      Vec3 d = pixel_to_ray(grid, u, v);
      REQUIRE(d.norm() == Catch::Approx(1.0).margin(1e-9));
      // ray -> angles -> pixel -> ray
      double theta = std::asin(std::clamp(d.z, -1.0, 1.0));
      double phi = std::atan2(d.x, d.y);
      double uc = (phi + kPi) * grid.width / (2 * kPi);
      double vc = (kPi / 2 - theta) * grid.height / kPi;
      Vec3 d2 = ray_direction(grid, uc, vc);
      REQUIRE((d - d2).norm() < 1e-9);
      REQUIRE(uc == Catch::Approx(u + 0.5).margin(1e-9));
      REQUIRE(vc == Catch::Approx(v + 0.5).margin(1e-9));
    }
  }
}

TEST_CASE("pixel_to_world basics", "[geometry]") {
  Rng rng(7);
  EquirectGrid grid(8, 4);
  PanoramaView view = random_view(rng, grid);

  SECTION("invalid depth gives no point") {
    view.depth.at(1, 2) = -1.0;
    CHECK_FALSE(pixel_to_world(view, 2, 1).has_value());
  }

  SECTION("point is position + depth * rotated ray") {
    view.depth.at(1, 3) = 2.5;
    Vec3 expected =
        view.pose.position + 2.5 * view.pose.rotation.rotate(pixel_to_ray(grid, 3, 1));
    Vec3 got = *pixel_to_world(view, 3, 1);
    CHECK((got - expected).norm() < 1e-12);
  }

  SECTION("depth 2 along a forward-looking pixel lands at (0,2,0)") {
    // rotate the pose so pixel (1,1) looks along +y exactly
    PanoramaView v2 = view;
    Vec3 r = pixel_to_ray(grid, 1, 1);
    Vec3 axis = r.cross(Vec3{0, 1, 0});
    double angle = std::acos(std::clamp(r.dot(Vec3{0, 1, 0}), -1.0, 1.0));
    v2.pose = Pose{{0, 0, 0}, Quat::from_axis_angle(axis, angle)};
    v2.depth.at(1, 1) = 2.0;
    Vec3 p = *pixel_to_world(v2, 1, 1);
    CHECK(p.x == Catch::Approx(0.0).margin(1e-9));
    CHECK(p.y == Catch::Approx(2.0).margin(1e-9));
    CHECK(p.z == Catch::Approx(0.0).margin(1e-9));

    // translation additivity
    v2.pose.position = {5, 0, 0};
    Vec3 q = *pixel_to_world(v2, 1, 1);
    CHECK((q - (p + Vec3{5, 0, 0})).norm() < 1e-9);
  }
}

TEST_CASE("world_to_pixel basics", "[geometry]") {
  EquirectGrid grid(64, 32);
  PanoramaView view;
  view.grid = grid;
  view.pose = Pose::identity();
  view.rgb = ImageF(grid.height, grid.width, 3);
  view.depth = DepthMap(grid.height, grid.width, 1, 1.0);

  SECTION("straight ahead maps to the center") {
    auto pp = world_to_pixel(view, {0, 7.5, 0});
    CHECK(pp.u == Catch::Approx(grid.width / 2.0).margin(1e-9));
    CHECK(pp.v == Catch::Approx(grid.height / 2.0).margin(1e-9));
    CHECK(pp.range == Catch::Approx(7.5));
  }

  SECTION("camera center is a singularity") {
    CHECK_THROWS_AS(world_to_pixel(view, view.pose.position), Error);
  }

  SECTION("azimuth wraps at the seam") {
    // a point just west of the -pi seam (behind the camera, slightly -x)
    auto pp = world_to_pixel(view, {-0.001, -10.0, 0});
    CHECK(pp.u < 0.5);
    CHECK(pp.u > 0.0);
  }
}

TEST_CASE("pixel -> world -> pixel round trip on an 8x16 view", "[geometry]") {
  Rng rng(11);
  EquirectGrid grid(16, 8);
  PanoramaView view = random_view(rng, grid);
  for (int v = 0; v < grid.height; ++v)
    for (int u = 0; u < grid.width; ++u) {
      auto p = pixel_to_world(view, u, v);
      REQUIRE(p.has_value());
      auto pp = world_to_pixel(view, *p);
      REQUIRE(pp.u == Catch::Approx(u + 0.5).margin(1e-6));
      REQUIRE(pp.v == Catch::Approx(v + 0.5).margin(1e-6));
      REQUIRE(pp.range == Catch::Approx(view.depth.at(v, u)).margin(1e-9));
    }
}

TEST_CASE("round trip holds for random poses and grids", "[geometry]") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int h = 2 * rng.range(1, 8);
    EquirectGrid grid(2 * h, h);
    PanoramaView view = random_view(rng, grid);
    for (int k = 0; k < 20; ++k) {
      int u = rng.range(0, grid.width - 1);
      int v = rng.range(0, grid.height - 1);
      auto p = pixel_to_world(view, u, v);
      auto pp = world_to_pixel(view, *p);
      REQUIRE(pp.u == Catch::Approx(u + 0.5).margin(1e-6));
      REQUIRE(pp.v == Catch::Approx(v + 0.5).margin(1e-6));
    }
  }
}

TEST_CASE("world_to_pixel is rotation equivariant", "[geometry]") {
  Rng rng(31);
  EquirectGrid grid(32, 16);
  for (int trial = 0; trial < 25; ++trial) {
    PanoramaView view = random_view(rng, grid);
    Vec3 p{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
    if ((p - view.pose.position).norm() < 1e-3) continue;
    auto before = world_to_pixel(view, p);

    Quat r = random_rotation(rng);
    PanoramaView rotated = view;
    rotated.pose.position = r.rotate(view.pose.position);
    rotated.pose.rotation = r * view.pose.rotation;
    auto after = world_to_pixel(rotated, r.rotate(p));
    REQUIRE(after.u == Catch::Approx(before.u).margin(1e-6));
    REQUIRE(after.v == Catch::Approx(before.v).margin(1e-6));
  }
}

TEST_CASE("pose invariants", "[geometry]") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Pose pose = random_pose(rng);
    CHECK(std::abs(pose.rotation.norm() - 1.0) < 1e-9);
    Pose id = pose.compose(pose.inverse());
    CHECK(id.position.norm() < 1e-9);
    CHECK(std::abs(std::abs(id.rotation.w) - 1.0) < 1e-9);
    CHECK(std::abs(id.rotation.x) < 1e-9);
    CHECK(std::abs(id.rotation.y) < 1e-9);
    CHECK(std::abs(id.rotation.z) < 1e-9);
  }
  Pose bad{{0, 0, 0}, {1.1, 0, 0, 0}};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("rendered pixels lie on scene surfaces", "[geometry]") {
  synth::SceneSpec spec;
  spec.grid = EquirectGrid(32, 16);
  spec.boxes.push_back({{2.5, 6.0, 0.75}, {1.5, 1.5, 1.5}, {0.8, 0.3, 0.2}});
  spec.boxes.push_back({{-3.0, 9.0, 0.6}, {1.2, 2.0, 1.2}, {0.2, 0.6, 0.8}});
  auto seq = synth::generate(spec);
  for (const auto& view : seq.views) {
    for (int v = 0; v < view.grid.height; ++v)
      for (int u = 0; u < view.grid.width; ++u) {
        auto p = pixel_to_world(view, u, v);
        if (!p) continue;
        REQUIRE(testsup::distance_to_surface(spec, view.frame_index, *p, false) < 1e-6);
      }
  }
}

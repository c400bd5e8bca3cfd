#include <doctest.h>

#include <random>

#include "hotwire/material/material.hpp"
#include "hotwire/projection/camera.hpp"
#include "hotwire/projection/contour.hpp"
#include "hotwire/projection/raster.hpp"
#include "support/oracles.hpp"
#include "support/shapes.hpp"

using namespace hotwire;

namespace {

BinaryImage random_image(std::mt19937_64& rng, int res, double density) {
  std::bernoulli_distribution B(density);
  BinaryImage img(res);
  for (auto& b : img.bits) b = B(rng) ? 1 : 0;
  return img;
}

bool has_diagonal_pair(const BinaryImage& img) {
  for (int r = 0; r + 1 < img.resolution; ++r)
    for (int c = 0; c + 1 < img.resolution; ++c) {
      const int a = img.at(c, r), b = img.at(c + 1, r), d = img.at(c, r + 1), e = img.at(c + 1, r + 1);
      if ((a && e && !b && !d) || (b && d && !a && !e)) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("camera frame is orthonormal and right-handed") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> phi(-M_PI / 2, M_PI / 2), theta(0.0, 2 * M_PI);
  for (int i = 0; i < 200; ++i) {
    const Viewpoint v{phi(rng), theta(rng), 2.0};
    const CameraFrame f = camera_frame(v);
    CHECK(f.view_dir.norm() == doctest::Approx(1.0));
    CHECK(std::abs(f.right.dot(f.up)) < 1e-12);
    CHECK(std::abs(f.right.dot(f.view_dir)) < 1e-12);
    CHECK(std::abs(f.up.dot(f.view_dir)) < 1e-12);
    CHECK(f.right.cross(f.up).dot(-f.view_dir) == doctest::Approx(1.0));
    CHECK((f.position + 2.0 * f.view_dir).norm() < 1e-12);
    const Vec3 p(0.1, -0.2, 0.3);
    CHECK((f.lift(f.project(p)) + f.view_dir.dot(p) * f.view_dir - p).norm() < 1e-12);
  }
  CHECK_THROWS_AS(camera_frame(Viewpoint{0, 0, 0}), InputError);
}

TEST_CASE("box raster counts match the analytic pixel oracle") {
  const TriMesh box = make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  const CameraFrame f = camera_frame(Viewpoint{0.0, 0.0, 2.0});
  const int res = 256;
  const double px = 2.0 * f.scale / res;
  std::size_t centre = 0, conservative = 0;
  for (int r = 0; r < res; ++r)
    for (int c = 0; c < res; ++c) {
      const Vec2 q = pixel_center(f, res, c, r);
      if (std::abs(q.x()) < 0.5 && std::abs(q.y()) < 0.5) ++centre;
      if (std::abs(q.x()) - 0.5 * px <= 0.5 && std::abs(q.y()) - 0.5 * px <= 0.5) ++conservative;
    }
  CHECK(rasterize_mesh_area(box, f, res, Coverage::Center).count() == centre);
  CHECK(rasterize_mesh_area(box, f, res, Coverage::Conservative).count() == conservative);
  const MaterialState pristine;
  CHECK(rasterize_material_area(pristine, f, res).count() == centre);
}

TEST_CASE("conservative coverage contains centre coverage") {
  const TriMesh blob = test::bumpy_blob(0.35, 0.2, 3);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> phi(-1.5, 1.5), theta(0.0, 6.28);
  for (int i = 0; i < 10; ++i) {
    const CameraFrame f = camera_frame(Viewpoint{phi(rng), theta(rng), 2.0});
    const BinaryImage a = rasterize_mesh_area(blob, f, 128, Coverage::Center);
    const BinaryImage b = rasterize_mesh_area(blob, f, 128, Coverage::Conservative);
    for (std::size_t k = 0; k < a.bits.size(); ++k) CHECK((!a.bits[k] || b.bits[k]));
    CHECK(b.count() > a.count());
  }
}

TEST_CASE("silhouette area of a sphere approaches the disc area") {
  const TriMesh ico = test::icosphere(0.35, 5);
  const CameraFrame f = camera_frame(Viewpoint{0.3, 1.1, 2.0});
  const int res = 256;
  const double px = 2.0 * f.scale / res;
  const double area = rasterize_mesh_area(ico, f, res).count() * px * px;
  CHECK(area == doctest::Approx(M_PI * 0.35 * 0.35).epsilon(0.01));
}

TEST_CASE("area mismatch is symmetric and rejects mixed resolutions") {
  std::mt19937_64 rng(3);
  const BinaryImage a = random_image(rng, 32, 0.5), b = random_image(rng, 32, 0.5);
  CHECK(area_mismatch(a, b) == area_mismatch(b, a));
  CHECK(area_mismatch(a, a) == 0);
  CHECK_THROWS_AS(area_mismatch(a, BinaryImage(16)), InputError);
}

TEST_CASE("traced loops enclose exactly the set pixels") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const BinaryImage img = random_image(rng, 24, 0.2 + 0.015 * rep);
    double total = 0.0;
    for (const auto& l : trace_loops(img)) {
      total += l.signed_area;
      CHECK(l.vertices.size() >= 4);
      CHECK(signed_area(l.vertices) == doctest::Approx(l.signed_area));
    }
    CHECK(total == doctest::Approx(static_cast<double>(img.count())));
  }
}

TEST_CASE("single component silhouettes give one outer loop") {
  BinaryImage img(16);
  for (int r = 3; r < 12; ++r)
    for (int c = 2; c < 10; ++c) img.at(c, r) = 1;
  img.at(5, 6) = 0;  // hole
  const auto loops = trace_loops(img);
  int outer = 0, holes = 0;
  for (const auto& l : loops) (l.signed_area > 0 ? outer : holes)++;
  CHECK(outer == 1);
  CHECK(holes == 1);
  const CameraFrame f = camera_frame(Viewpoint{});
  const Polygon2 g = extract_outer_contour(img, f);
  const double px = 2.0 * f.scale / 16;
  CHECK(g.area() == doctest::Approx(72 * px * px));
  CHECK_THROWS_AS(extract_outer_contour(BinaryImage(16), f), InputError);
}

TEST_CASE("diagonal gap filling removes every diagonal pair") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    BinaryImage img = random_image(rng, 20, 0.4);
    const std::size_t before = img.count();
    const std::size_t added = fill_diagonal_gaps(img);
    CHECK(img.count() == before + added);
    CHECK_FALSE(has_diagonal_pair(img));
  }
}

TEST_CASE("lattice coordinates map the image border to the frame scale") {
  const CameraFrame f = camera_frame(Viewpoint{});
  CHECK((lattice_to_plane(f, 256, {0, 0}) - Vec2(-f.scale, -f.scale)).norm() < 1e-15);
  CHECK((lattice_to_plane(f, 256, {256, 256}) - Vec2(f.scale, f.scale)).norm() < 1e-15);
  // Pixel (col, row) spans lattice x in [col, col+1], y in [res-row-1, res-row].
  const Vec2 c = pixel_center(f, 256, 10, 20);
  const Vec2 lo = lattice_to_plane(f, 256, {10, 256 - 21});
  const Vec2 hi = lattice_to_plane(f, 256, {11, 256 - 20});
  CHECK((0.5 * (lo + hi) - c).norm() < 1e-14);
}

#include <doctest.h>

#include <random>

#include "hotwire/material/material.hpp"
#include "support/oracles.hpp"
#include "support/shapes.hpp"

using namespace hotwire;

namespace {

const Viewpoint kTop{M_PI / 2, 0.0, 2.0};
const Viewpoint kSide{0.0, 0.0, 2.0};

PrismCut circular_prism(const Viewpoint& v, double radius) {
  return PrismCut(camera_frame(v), test::circle_spline(128, radius));
}

// Segment-box clip, independent of the library's slab code.
bool clip(const Vec3& o, const Vec3& d, const Vec3& lo, const Vec3& hi, double& t0, double& t1) {
  t0 = -1e300;
  t1 = 1e300;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (o[k] < lo[k] || o[k] > hi[k]) return false;
      continue;
    }
    double a = (lo[k] - o[k]) / d[k], b = (hi[k] - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  return t0 <= t1;
}

}  // namespace

TEST_CASE("pristine stock fills the box") {
  const MaterialState m;
  const VolumeEstimate e = estimate_volume(m, 10000);
  CHECK(e.volume == 1.0);
  CHECK(e.standard_error == 0.0);
  CHECK(m.contains(Vec3(0.49, -0.49, 0.49)));
  CHECK_FALSE(m.contains(Vec3(0.51, 0.0, 0.0)));
  CHECK_THROWS_AS(estimate_volume(m, 10), InputError);
}

TEST_CASE("circular prism volume matches pi r^2") {
  const double r = 0.25;
  const MaterialState m = MaterialState().with_cut(circular_prism(kTop, r));
  const VolumeEstimate e = estimate_volume(m);
  CHECK(std::abs(e.volume - M_PI * r * r) < 3.0 * e.standard_error);
  CHECK(e.standard_error > 0.0);
  CHECK(e.standard_error < 1e-3);
}

TEST_CASE("orthogonal prisms agree with a voxel oracle") {
  const double r = 0.25;
  const MaterialState m =
      MaterialState().with_cut(circular_prism(kTop, r)).with_cut(circular_prism(kSide, r));
  // Cylinders about z and x; exact membership on a 128^3 grid of cell centres.
  const int n = 128;
  std::size_t inside = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = -0.5 + (i + 0.5) / n, y = -0.5 + (j + 0.5) / n, z = -0.5 + (k + 0.5) / n;
        inside += (x * x + y * y < r * r) && (y * y + z * z < r * r);
      }
  const double grid = static_cast<double>(inside) / (double(n) * n * n);
  const VolumeEstimate e = estimate_volume(m);
  CHECK(std::abs(e.volume - grid) < 3.0 * e.standard_error + 1e-3);
  // Steinmetz solid.
  CHECK(grid == doctest::Approx(16.0 * r * r * r / 3.0).epsilon(0.01));
}

TEST_CASE("cuts only ever remove material") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.5, 0.5), phi(-1.5, 1.5), th(0.0, 6.28), rad(0.2, 0.45);
  MaterialState m;
  std::vector<Vec3> pts(2000);
  for (auto& p : pts) p = Vec3(U(rng), U(rng), U(rng));
  for (int c = 0; c < 5; ++c) {
    const MaterialState next = m.with_cut(circular_prism({phi(rng), th(rng), 2.0}, rad(rng)));
    for (const auto& p : pts) CHECK((!next.contains(p) || m.contains(p)));
    CHECK(estimate_volume(next).volume <= estimate_volume(m).volume);
    m = next;
  }
}

TEST_CASE("apply_cut refuses cuts that would touch the mesh") {
  const TriMesh ball = test::icosphere(0.3);
  const PrismCut tight = circular_prism(kTop, 0.2);
  const PrismCut loose = circular_prism(kTop, 0.35);
  CHECK_FALSE(cut_encloses(tight, ball));
  CHECK(cut_encloses(loose, ball));
  CHECK_THROWS_AS(apply_cut(MaterialState(), tight, &ball), InvalidState);
  CHECK(apply_cut(MaterialState(), loose, &ball).cuts().size() == 1);
}

TEST_CASE("workbench extends the material below the box") {
  const MaterialState m{Workbench{}};
  CHECK(m.contains(Vec3(0.0, 0.1, -0.7)));
  CHECK_FALSE(m.contains(Vec3(0.4, 0.0, -0.7)));
  CHECK_FALSE(m.contains_in_box(Vec3(0.0, 0.1, -0.7)));
  CHECK(m.bounds_min().z() == -1.0);
  CHECK(Workbench{}.mesh().vertices.size() > 0);
}

TEST_CASE("mesh volumes against the signed tetrahedra oracle") {
  const TriMesh ico = test::icosphere(0.35, 4);
  CHECK(is_closed_orientable(ico));
  CHECK(mesh_volume(ico) == doctest::Approx(test::naive_mesh_volume(ico)));
  CHECK(voxel_volume(ico, 128) == doctest::Approx(test::naive_mesh_volume(ico)).epsilon(0.02));
  const TriMesh box = make_box({-0.2, -0.1, 0.0}, {0.2, 0.1, 0.3});
  CHECK(mesh_volume(box) == doctest::Approx(0.4 * 0.2 * 0.3));
  const TriMesh holed = test::holed_icosphere(0.35);
  CHECK_FALSE(is_closed_orientable(holed));
  CHECK(mesh_volume(holed) == doctest::Approx(4.0 / 3.0 * M_PI * 0.35 * 0.35 * 0.35).epsilon(0.03));
}

TEST_CASE("termination compares excess volume with alpha") {
  CHECK(termination_check(0.52, 0.5, 0.025));
  CHECK_FALSE(termination_check(0.53, 0.5, 0.025));
  const TriMesh ball = test::icosphere(0.35, 3);
  CHECK_FALSE(termination_check(MaterialState(), ball, 0.025, 20000));
}

TEST_CASE("extracted surface encloses the estimated volume") {
  const MaterialState box;
  const TriMesh s0 = extract_surface_mesh(box, 32);
  CHECK(is_closed_orientable(s0));
  // Edges and corners of the box are chamfered by one grid cell.
  CHECK(test::naive_mesh_volume(s0) == doctest::Approx(1.0).epsilon(0.01));

  const MaterialState cyl = box.with_cut(circular_prism(kTop, 0.25));
  const TriMesh s1 = extract_surface_mesh(cyl, 64);
  CHECK(is_closed_orientable(s1));
  CHECK(test::naive_mesh_volume(s1) == doctest::Approx(M_PI / 16).epsilon(0.02));
}

TEST_CASE("ray sampler agrees with pointwise membership") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-0.7, 0.7), phi(-1.5, 1.5), th(0.0, 6.28), rad(0.15, 0.4);
  MaterialState m{Workbench{}};
  for (int c = 0; c < 3; ++c) m = m.with_cut(circular_prism({phi(rng), th(rng), 2.0}, rad(rng)));
  const int depth = 64;
  int hits = 0, misses = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 dir = camera_frame({phi(rng), th(rng), 2.0}).view_dir;
    const RaySampler rs(m, dir);
    for (int k = 0; k < 200; ++k) {
      const Vec3 o = Vec3(U(rng), U(rng), U(rng)) - 3.0 * dir;
      double t0, t1;
      bool expect = false;
      if (clip(o, dir, m.bounds_min(), m.bounds_max(), t0, t1)) {
        const double step = (t1 - t0) / (depth - 1);
        for (int i = 0; i < depth && !expect; ++i) expect = m.contains(o + (t0 + i * step) * dir);
      }
      CHECK(rs.hits(o, depth) == expect);
      (expect ? hits : misses)++;
    }
  }
  CHECK(hits > 100);
  CHECK(misses > 100);
}

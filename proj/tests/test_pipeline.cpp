#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hotwire/pipeline/io.hpp"
#include "hotwire/pipeline/plan.hpp"
#include "support/oracles.hpp"
#include "support/shapes.hpp"

using namespace hotwire;

namespace {

PlanConfig desk_config() {
  PlanConfig c;
  c.resolution = 128;
  c.depth_samples = 128;
  c.n_candidates = 200;
  c.ga.n_pop = 8;
  c.volume_samples = 50000;
  c.max_cuts = 4;
  return c;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hotwire_test_" + name)).string();
}

}  // namespace

TEST_CASE("OBJ parsing") {
  std::istringstream in("# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\nf -4 -3 -2\n");
  const TriMesh m = parse_obj(in);
  CHECK(m.vertices.size() == 4);
  REQUIRE(m.triangles.size() == 3);
  CHECK(m.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.triangles[1] == std::array<int, 3>{0, 2, 3});
  CHECK(m.triangles[2] == std::array<int, 3>{0, 1, 2});

  std::istringstream zero("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
  try {
    parse_obj(zero);
    FAIL("index 0 accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream junk("v 0 0 zebra\n");
  CHECK_THROWS_AS(parse_obj(junk), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(parse_obj(empty), InputError);
  CHECK_THROWS_AS(load_obj(temp_path("missing.obj")), InputError);
}

TEST_CASE("OBJ write and read round trip") {
  const TriMesh a = test::icosphere(0.3, 2);
  std::stringstream s;
  write_obj(a, s);
  const TriMesh b = parse_obj(s);
  REQUIRE(b.vertices.size() == a.vertices.size());
  CHECK(b.triangles == a.triangles);
  for (std::size_t i = 0; i < a.vertices.size(); ++i) CHECK((a.vertices[i] - b.vertices[i]).norm() < 1e-12);
}

TEST_CASE("contour CSV") {
  std::istringstream in("# ring\n0,0\n\n1, 0\n0.5,1\n");
  const auto v = parse_contour_csv(in);
  REQUIRE(v.size() == 3);
  CHECK(v[2] == Vec2(0.5, 1.0));
  std::istringstream bad("0,0\n1\n");
  CHECK_THROWS_AS(parse_contour_csv(bad), ParseError);
}

TEST_CASE("normalization fits the stock box") {
  TriMesh big = test::ellipsoid({3.0, 1.0, 2.0});
  for (auto& v : big.vertices) v += Vec3(10.0, -4.0, 2.0);
  const Normalized n = normalize_input(big);
  CHECK(n.mesh.bbox_max().maxCoeff() <= 0.48 + 1e-12);
  CHECK(n.mesh.bbox_min().minCoeff() >= -0.48 - 1e-12);
  CHECK((n.mesh.bbox_max() + n.mesh.bbox_min()).norm() < 1e-12);
  for (std::size_t i = 0; i < big.vertices.size(); ++i)
    CHECK((apply(n.transform, big.vertices[i]) - n.mesh.vertices[i]).norm() < 1e-12);
  const Transform inv = n.transform.inverse();
  CHECK((apply(inv, n.mesh.vertices[5]) - big.vertices[5]).norm() < 1e-9);

  // Small meshes keep their size unless asked to fill.
  const TriMesh small = test::icosphere(0.1);
  CHECK(normalize_input(small).mesh.bbox_max().x() == doctest::Approx(0.1));
  CHECK(normalize_input(small, true).mesh.bbox_max().x() == doctest::Approx(0.48));
  const Normalized bottom = normalize_input(small, false, true);
  CHECK(bottom.mesh.bbox_min().z() == doctest::Approx(-kBoxHalf));
}

TEST_CASE("ruled surface interpolates its boundary curves") {
  const CameraFrame f = camera_frame({0.4, 1.2, 2.0});
  const ClosedBSpline2 c = test::circle_spline(32, 0.3);
  const RuledSurface s = extrude_ruled_surface(c, f);
  CHECK(s.half_length >= 1.0);
  for (double u : {0.0, 0.13, 0.5, 0.77}) {
    CHECK((s.at(u, 0.0) - s.c0(u)).norm() < 1e-14);
    CHECK((s.at(u, 1.0) - s.c1(u)).norm() < 1e-14);
    // Rulings run along the view direction and project onto the curve.
    const Vec3 r = s.c1(u) - s.c0(u);
    CHECK(r.normalized().dot(f.view_dir) == doctest::Approx(1.0));
    CHECK((f.project(s.at(u, 0.37)) - c.eval(u)).norm() < 1e-12);
  }
  // The surface mesh is a closed-loop strip: every edge used at most twice.
  const TriMesh m = s.mesh(64);
  CHECK(m.triangles.size() == 128);
}

TEST_CASE("bottom plane cut keeps the upper half space") {
  const PrismCut b = bottom_plane_cut(-0.3);
  CHECK(b.contains(Vec3(0.2, -0.4, -0.29)));
  CHECK(b.contains(Vec3(-0.45, 0.45, 0.49)));
  CHECK_FALSE(b.contains(Vec3(0.0, 0.0, -0.31)));
  CHECK_FALSE(b.contains(Vec3(0.45, -0.45, -0.49)));
}

TEST_CASE("curve JSON round trip is exact") {
  const ClosedBSpline2 c = test::circle_spline(17, 0.3).insert_knot(0.123456789);
  const ClosedBSpline2 d = curve_from_json(nlohmann::ordered_json::parse(curve_to_json(c).dump()));
  CHECK(d.degree() == c.degree());
  CHECK(d.knots() == c.knots());
  CHECK(d.control_points() == c.control_points());
  nlohmann::ordered_json bad = curve_to_json(c);
  bad["knots"][3] = -1.0;
  CHECK_THROWS_AS(curve_from_json(bad), InputError);
}

TEST_CASE("empty plan replays to the pristine box") {
  CutPlan p;
  p.termination = "alpha";
  const TriMesh ball = test::icosphere(0.3);
  const SimulationReport r = simulate(p, ball, 16, false);
  REQUIRE(r.volumes.size() == 1);
  CHECK(r.volumes[0] == 1.0);
  CHECK(replay(p).cuts().empty());
}

TEST_CASE("planning an icosphere end to end") {
  const TriMesh ball = test::icosphere(0.35, 3);
  const PlanConfig cfg = desk_config();
  const CutPlan p = plan(ball, cfg, {});
  REQUIRE(!p.cuts.empty());
  CHECK(p.cuts.size() <= static_cast<std::size_t>(cfg.max_cuts));
  CHECK((p.termination == "alpha" || p.termination == "max_iters"));
  CHECK(p.mesh_volume == doctest::Approx(test::naive_mesh_volume(ball)));

  // Volumes never increase from cut to cut.
  double prev = p.initial_volume;
  for (const auto& c : p.cuts) {
    CHECK(c.volume <= prev + 3.0 * c.volume_stderr);
    prev = c.volume;
  }

  // Every surface sample of the mesh survives in the remnant.
  const MaterialState m = replay(p);
  std::size_t outside = 0;
  for (const auto& q : sample_surface(ball, 5000, 3)) outside += !m.contains(q);
  CHECK(outside == 0);

  // Serialization round trip and byte determinism.
  const std::string a = temp_path("a.json"), b = temp_path("b.json");
  write_plan(p, a);
  const CutPlan q = read_plan(a);
  CHECK(q.cuts.size() == p.cuts.size());
  CHECK(q.termination == p.termination);
  write_plan(q, b);
  std::ifstream fa(a), fb(b);
  const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);
  CHECK(plan_to_json(plan(ball, cfg, {})).dump() == plan_to_json(p).dump());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("fabrication ends with the bottom plane") {
  const Normalized n = normalize_input(test::ellipsoid({0.3, 0.25, 0.2}), false, true);
  PlanConfig cfg = desk_config();
  cfg.max_cuts = 2;
  cfg.hemisphere = true;
  FabricationOptions fab;
  fab.workbench = true;
  fab.bottom_plane = true;
  const CutPlan p = plan(n.mesh, cfg, fab);
  REQUIRE(!p.cuts.empty());
  // The last cut separates the part from the bench.
  CHECK(p.cuts.back().kind == "bottom_plane");
  for (const auto& c : p.cuts)
    if (c.kind == "contour") CHECK(c.viewpoint.phi >= 0.0);
  const MaterialState m = replay(p);
  CHECK(m.workbench().has_value());
  CHECK_FALSE(m.contains(Vec3(0.0, 0.0, -0.7)));
  std::size_t outside = 0;
  for (const auto& q : sample_surface(n.mesh, 3000, 4)) outside += !m.contains(q);
  CHECK(outside == 0);
}

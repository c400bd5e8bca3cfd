#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hotwire/fit/spline_fit.hpp"
#include "hotwire/material/material.hpp"
#include "hotwire/viewpoint/ga.hpp"

namespace hotwire {

using Transform = Eigen::Matrix4d;

struct Normalized {
  TriMesh mesh;
  Transform transform;  // original -> normalized
};

/// Centres the mesh bounding box at the origin and shrinks it to fit the
/// stock box with a 2% margin per side. Smaller meshes keep their size unless
/// `fill` is set. With `align_bottom` the lowest point ends on the bottom face.
Normalized normalize_input(const TriMesh& mesh, bool fill = false, bool align_bottom = false);
Vec3 apply(const Transform& t, const Vec3& p);
TriMesh apply(const Transform& t, const TriMesh& mesh);

/// s(u, v) = (1 - v) c0(u) + v c1(u), c0/c1 the curve lifted to the plane
/// through the origin and pushed half_length against / along the view direction.
struct RuledSurface {
  CameraFrame frame;
  ClosedBSpline2 curve;
  double half_length = 1.0;

  Vec3 c0(double u) const;
  Vec3 c1(double u) const;
  Vec3 at(double u, double v) const;
  /// Quad strip with `samples` rulings, triangulated.
  TriMesh mesh(int samples = 256, double clamp_half_length = -1.0) const;
};

RuledSurface extrude_ruled_surface(const ClosedBSpline2& curve, const CameraFrame& frame);

struct FabricationOptions {
  bool workbench = false;
  Workbench bench;
  bool bottom_plane = false;
};

struct PlanConfig {
  double alpha = 0.025;
  bool relative_alpha = false;  // alpha as a fraction of the mesh volume
  int max_cuts = 15;
  std::uint64_t seed = 1;
  bool hemisphere = false;
  bool fill = false;
  int resolution = 256;
  int depth_samples = 256;
  int n_candidates = 5000;
  double view_radius = 2.0;
  std::size_t volume_samples = 200000;
  std::uint64_t volume_seed = kDefaultVolumeSeed;
  int max_failures = 3;
  GAConfig ga;
  FitConfig fit;
};

struct CutRecord {
  std::string kind = "contour";
  Viewpoint viewpoint;
  CameraFrame frame;
  ClosedBSpline2 curve = ClosedBSpline2::uniform(1, {Vec2(0, 0), Vec2(1, 0)});
  std::vector<Vec2> contour;
  double fitness = 0.0;
  double d_avg = 0.0;
  double volume = 0.0;
  double volume_stderr = 0.0;
  std::size_t ga_evaluations = 0;
  int fit_iterations = 0;

  PrismCut to_cut() const { return PrismCut(frame, curve, kind); }
};

struct CutPlan {
  int version = 1;
  std::string mesh_path;
  double mesh_volume = 0.0;
  PlanConfig config;
  FabricationOptions fabrication;
  Transform transform = Transform::Identity();
  std::vector<CutRecord> cuts;
  std::string termination;  // "alpha", "max_iters" or "aborted"
  double initial_volume = 1.0;
};

struct PlanHooks {
  std::function<void(const std::string&)> log;
  /// Called after each contour cut with the images and fit result.
  std::function<void(int, const BinaryImage&, const CutRecord&, const FitResult&)> on_cut;
};

/// Builds the cut sequence for an already normalized mesh.
CutPlan plan(const TriMesh& normalized_mesh, const PlanConfig& config, const FabricationOptions& fab,
             const PlanHooks& hooks = {});

/// Material after replaying every cut of a plan on a pristine box.
MaterialState replay(const CutPlan& plan);

/// Bottom plane as a cut seen from the side: keeps z >= bottom.
PrismCut bottom_plane_cut(double bottom = -kBoxHalf);

struct SimulationReport {
  std::vector<double> volumes;  // after each cut, index 0 = pristine
  std::vector<double> volume_stderr;
  std::vector<double> d_result_avg;  // mean distance remnant surface -> mesh after each cut
  TriMesh remnant;
};

SimulationReport simulate(const CutPlan& plan, const TriMesh& normalized_mesh, int grid_resolution = 128,
                          bool per_cut_distance = true);

/// Mean distance from area-weighted samples of `from` to the surface `to`.
double mean_surface_distance(const TriMesh& from, const TriMesh& to, std::size_t samples, std::uint64_t seed);

nlohmann::ordered_json plan_to_json(const CutPlan& plan);
CutPlan plan_from_json(const nlohmann::ordered_json& j);
void write_plan(const CutPlan& plan, const std::string& path);
CutPlan read_plan(const std::string& path);

nlohmann::ordered_json curve_to_json(const ClosedBSpline2& curve);
ClosedBSpline2 curve_from_json(const nlohmann::ordered_json& j);

}  // namespace hotwire

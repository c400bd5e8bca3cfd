#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hotwire/geom/bspline.hpp"
#include "hotwire/geom/mesh.hpp"
#include "hotwire/geom/polygon.hpp"
#include "hotwire/projection/camera.hpp"

namespace hotwire {

/// Half edge length of the stock box.
inline constexpr double kBoxHalf = 0.5;

/// Support cylinder about the z axis below the stock.
struct Workbench {
  double radius = 0.3;
  double z_bottom = -1.0;
  double z_top = -0.5;

  bool contains(const Vec3& p) const;
  TriMesh mesh(int segments = 64) const;
};

/// Extrusion of a closed curve along a camera's view direction; keeps the
/// points whose projection lies inside the curve.
class PrismCut {
 public:
  PrismCut(CameraFrame frame, ClosedBSpline2 curve, std::string kind = "contour");

  const CameraFrame& frame() const { return frame_; }
  const ClosedBSpline2& curve() const { return curve_; }
  const std::string& kind() const { return kind_; }
  const std::vector<Vec2>& polygon() const { return locator_->ring(); }

  bool contains(const Vec3& p) const { return locator_->contains(frame_.project(p)); }
  bool contains_projected(const Vec2& q) const { return locator_->contains(q); }

 private:
  CameraFrame frame_;
  ClosedBSpline2 curve_;
  std::string kind_;
  std::shared_ptr<const PolygonLocator> locator_;
};

/// Remnant stock: (box, plus optional workbench) intersected with every cut.
class MaterialState {
 public:
  MaterialState() = default;
  explicit MaterialState(std::optional<Workbench> workbench) : workbench_(workbench) {}

  const std::vector<PrismCut>& cuts() const { return cuts_; }
  const std::optional<Workbench>& workbench() const { return workbench_; }

  bool contains(const Vec3& p) const;
  /// Membership restricted to the stock box.
  bool contains_in_box(const Vec3& p) const;

  Vec3 bounds_min() const;
  Vec3 bounds_max() const;

  MaterialState with_cut(PrismCut cut) const;

 private:
  bool inside_cuts(const Vec3& p) const;

  std::vector<PrismCut> cuts_;
  std::optional<Workbench> workbench_;
};

bool in_box(const Vec3& p);

/// True when every projected mesh triangle lies inside the cut region.
bool cut_encloses(const PrismCut& cut, const TriMesh& mesh);

/// Appends a cut. With a mesh given, throws InvalidState unless the cut
/// encloses the mesh.
MaterialState apply_cut(const MaterialState& material, PrismCut cut, const TriMesh* mesh = nullptr);

struct VolumeEstimate {
  double volume = 0.0;
  double standard_error = 0.0;
};

inline constexpr std::uint64_t kDefaultVolumeSeed = 0x5eed5eedULL;

/// Monte-Carlo volume inside the stock box.
VolumeEstimate estimate_volume(const MaterialState& material, std::size_t sample_budget = 200000,
                               std::uint64_t seed = kDefaultVolumeSeed);

/// Every edge shared by exactly two triangles with opposite orientation.
bool is_closed_orientable(const TriMesh& mesh);

/// Enclosed volume. Closed orientable meshes use the divergence theorem; other
/// meshes fall back to a 256^3 parity vote over three axes.
double mesh_volume(const TriMesh& mesh);
double voxel_volume(const TriMesh& mesh, int resolution = 256);

bool termination_check(double material_volume, double mesh_volume, double alpha);
bool termination_check(const MaterialState& material, const TriMesh& mesh, double alpha,
                       std::size_t sample_budget = 200000, std::uint64_t seed = kDefaultVolumeSeed);

/// Marching-tetrahedra surface of the material inside the stock box.
TriMesh extract_surface_mesh(const MaterialState& material, int grid_resolution = 128);

/// Per-ray membership along parallel view rays; intervals inside each cut are
/// computed exactly and then tested against the depth samples.
class RaySampler {
 public:
  RaySampler(const MaterialState& material, const Vec3& view_dir);

  /// Whether any of `depth_samples` evenly spaced points on the ray through
  /// `origin` (clipped to the material bounds) is inside the material.
  bool hits(const Vec3& origin, int depth_samples) const;

 private:
  struct CutLine {
    const PrismCut* cut;
    bool constant = false;
    Vec2 axis;  // unit direction of projected rays
    double speed = 0.0;
    double pmin = 0.0, bin_width = 1.0;
    std::vector<double> along, perp;
    std::vector<std::vector<int>> bins;
  };

  void cut_intervals(const CutLine& line, const Vec3& origin, std::vector<double>& out) const;

  const MaterialState& material_;
  Vec3 dir_;
  std::vector<CutLine> lines_;
  mutable std::vector<double> scratch_, current_, next_;
};

}  // namespace hotwire

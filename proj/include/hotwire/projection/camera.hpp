#pragma once

#include <cstdint>
#include <vector>

#include "hotwire/geom/types.hpp"

namespace hotwire {

/// Point on the view sphere: elevation phi, azimuth theta, radius r.
struct Viewpoint {
  double phi = 0.0;
  double theta = 0.0;
  double r = 2.0;

  Vec3 direction() const;  // unit vector from origin toward the camera
};

/// Orthographic camera. The image plane passes through the origin and is
/// spanned by (right, up); image coordinates are (right . p, up . p).
struct CameraFrame {
  Vec3 position;
  Vec3 view_dir;  // unit, toward the origin
  Vec3 right;
  Vec3 up;
  double scale = 0.0;  // world units from image centre to image edge

  Vec2 project(const Vec3& p) const { return {right.dot(p), up.dot(p)}; }
  Vec3 lift(const Vec2& q) const { return q.x() * right + q.y() * up; }
};

/// Half-extent that covers the unit box from any direction with 10% margin.
inline constexpr double kFrameScale = 0.8660254037844386 * 1.1;

CameraFrame camera_frame(const Viewpoint& v, double scale = kFrameScale);

/// Row-major square occupancy image; row 0 is the top of the image.
struct BinaryImage {
  int resolution = 0;
  std::vector<std::uint8_t> bits;

  BinaryImage() = default;
  explicit BinaryImage(int res) : resolution(res), bits(static_cast<std::size_t>(res) * res, 0) {}

  std::uint8_t& at(int col, int row) { return bits[static_cast<std::size_t>(row) * resolution + col]; }
  std::uint8_t at(int col, int row) const { return bits[static_cast<std::size_t>(row) * resolution + col]; }
  std::size_t count() const;
};

/// Image-plane centre of pixel (col, row).
Vec2 pixel_center(const CameraFrame& frame, int resolution, int col, int row);

}  // namespace hotwire

#include "hotwire/projection/camera.hpp"

#include <algorithm>
#include <cmath>

namespace hotwire {

Vec3 Viewpoint::direction() const {
  return {std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), std::sin(phi)};
}

CameraFrame camera_frame(const Viewpoint& v, double scale) {
  if (!(v.r > 0.0)) throw InputError("viewpoint radius must be positive");
  CameraFrame f;
  const Vec3 dir = v.direction();
  f.position = v.r * dir;
  f.view_dir = -dir;
  // Roll convention: world +z projected into the image plane, or +x near the poles.
  const Vec3 ref = std::abs(v.phi) > 80.0 * M_PI / 180.0 ? Vec3::UnitX() : Vec3::UnitZ();
  f.up = (ref - ref.dot(dir) * dir).normalized();
  f.right = f.up.cross(dir);
  f.scale = scale;
  return f;
}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Vec2 pixel_center(const CameraFrame& frame, int resolution, int col, int row) {
  const double s = frame.scale;
  return {(-1.0 + (2.0 * col + 1.0) / resolution) * s, (1.0 - (2.0 * row + 1.0) / resolution) * s};
}

}  // namespace hotwire

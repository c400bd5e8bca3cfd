#pragma once

#include <vector>

#include "hotwire/geom/polygon.hpp"
#include "hotwire/projection/camera.hpp"

namespace hotwire {

/// Boundary loop on the pixel-corner lattice (x = column, y = rows from the
/// bottom). Outer boundaries run counter-clockwise, holes clockwise.
struct LatticeLoop {
  std::vector<Vec2> vertices;  // integer-valued, turn vertices only
  double signed_area = 0.0;
};

/// All boundary loops of the union of set pixel squares. Diagonal pixel pairs
/// are treated as disconnected.
std::vector<LatticeLoop> trace_loops(const BinaryImage& image);

/// Image-plane coordinates of a lattice point.
Vec2 lattice_to_plane(const CameraFrame& frame, int resolution, const Vec2& lattice);

/// Largest counter-clockwise loop, in image-plane world coordinates.
Polygon2 extract_outer_contour(const BinaryImage& image, const CameraFrame& frame);

/// Sets pixels so that no 2x2 block contains only a diagonal pair; returns the
/// number of pixels added.
std::size_t fill_diagonal_gaps(BinaryImage& image);

}  // namespace hotwire

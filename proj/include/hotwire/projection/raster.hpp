#pragma once

#include <string>

#include "hotwire/geom/mesh.hpp"
#include "hotwire/projection/camera.hpp"

namespace hotwire {

class MaterialState;

enum class Coverage {
  Center,        // pixel set iff its centre is covered (top-left fill rule)
  Conservative,  // pixel set iff the closed pixel square touches the triangle
};

BinaryImage rasterize_mesh_area(const TriMesh& mesh, const CameraFrame& frame, int resolution = 256,
                                Coverage coverage = Coverage::Center);

/// Pixel set iff one of `depth_samples` evenly spaced points on the pixel's
/// view ray, clipped to the material's bounds, is inside the material.
BinaryImage rasterize_material_area(const MaterialState& material, const CameraFrame& frame, int resolution = 256,
                                    int depth_samples = 256);

/// Number of differing pixels.
std::size_t area_mismatch(const BinaryImage& a, const BinaryImage& b);

/// Binary PGM (P5, 0/255).
void write_pgm(const BinaryImage& image, const std::string& path);

}  // namespace hotwire

#include "hotwire/projection/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hotwire/material/material.hpp"

namespace hotwire {

namespace {

struct PixelGrid {
  int res;
  double s;

  // Pixel columns/rows whose square may touch [lo, hi].
  int col_of(double x) const { return static_cast<int>(std::floor((x / s + 1.0) * 0.5 * res)); }
  int row_of(double y) const { return static_cast<int>(std::floor((1.0 - y / s) * 0.5 * res)); }
  double x_at(int col) const { return (-1.0 + 2.0 * col / res) * s; }  // left edge
  double y_at(int row) const { return (1.0 - 2.0 * row / res) * s; }   // top edge
};

bool top_left(const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  return e.y() < 0.0 || (e.y() == 0.0 && e.x() < 0.0);
}

void fill_center(BinaryImage& img, const PixelGrid& g, Vec2 a, Vec2 b, Vec2 c) {
  double area = cross2(b - a, c - a);
  if (area == 0.0) return;
  if (area < 0.0) std::swap(b, c);
  const Vec2 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
  const int c0 = std::max(0, g.col_of(lo.x()) - 1), c1 = std::min(g.res - 1, g.col_of(hi.x()) + 1);
  const int r0 = std::max(0, g.row_of(hi.y()) - 1), r1 = std::min(g.res - 1, g.row_of(lo.y()) + 1);
  const bool tab = top_left(a, b), tbc = top_left(b, c), tca = top_left(c, a);
  for (int row = r0; row <= r1; ++row) {
    const double y = (1.0 - (2.0 * row + 1.0) / g.res) * g.s;
    for (int col = c0; col <= c1; ++col) {
      const Vec2 p((-1.0 + (2.0 * col + 1.0) / g.res) * g.s, y);
      const double e0 = cross2(b - a, p - a), e1 = cross2(c - b, p - b), e2 = cross2(a - c, p - c);
      if ((e0 > 0.0 || (e0 == 0.0 && tab)) && (e1 > 0.0 || (e1 == 0.0 && tbc)) && (e2 > 0.0 || (e2 == 0.0 && tca)))
        img.at(col, row) = 1;
    }
  }
}

// Separating-axis test between a (possibly degenerate) triangle and a closed box.
bool touches_box(const Vec2 v[3], const Vec2& lo, const Vec2& hi) {
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = v[(i + 1) % 3] - v[i];
    if (e.squaredNorm() == 0.0) continue;
    const Vec2 n = perp(e);
    double tmin = n.dot(v[0]), tmax = tmin;
    for (int k = 1; k < 3; ++k) {
      tmin = std::min(tmin, n.dot(v[k]));
      tmax = std::max(tmax, n.dot(v[k]));
    }
    const double cx = n.x() >= 0.0 ? hi.x() : lo.x(), cy = n.y() >= 0.0 ? hi.y() : lo.y();
    const double bmax = n.x() * cx + n.y() * cy;
    const double bmin = n.x() * (lo.x() + hi.x() - cx) + n.y() * (lo.y() + hi.y() - cy);
    if (tmax < bmin || bmax < tmin) return false;
  }
  return true;
}

void fill_conservative(BinaryImage& img, const PixelGrid& g, const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 v[3] = {a, b, c};
  const Vec2 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
  const int c0 = std::max(0, g.col_of(lo.x()) - 1), c1 = std::min(g.res - 1, g.col_of(hi.x()) + 1);
  const int r0 = std::max(0, g.row_of(hi.y()) - 1), r1 = std::min(g.res - 1, g.row_of(lo.y()) + 1);
  for (int row = r0; row <= r1; ++row) {
    const double ytop = g.y_at(row), ybot = g.y_at(row + 1);
    if (ybot > hi.y() || ytop < lo.y()) continue;
    for (int col = c0; col <= c1; ++col) {
      const double xl = g.x_at(col), xr = g.x_at(col + 1);
      if (xl > hi.x() || xr < lo.x()) continue;
      if (img.at(col, row)) continue;
      if (touches_box(v, Vec2(xl, ybot), Vec2(xr, ytop))) img.at(col, row) = 1;
    }
  }
}

}  // namespace

BinaryImage rasterize_mesh_area(const TriMesh& mesh, const CameraFrame& frame, int resolution, Coverage coverage) {
  if (mesh.triangles.empty()) throw InputError("cannot rasterize an empty mesh");
  if (resolution < 1) throw InputError("resolution must be positive");
  BinaryImage img(resolution);
  const PixelGrid g{resolution, frame.scale};
  std::vector<Vec2> proj(mesh.vertices.size());
  for (std::size_t i = 0; i < proj.size(); ++i) proj[i] = frame.project(mesh.vertices[i]);
  for (const auto& t : mesh.triangles) {
    if (coverage == Coverage::Center)
      fill_center(img, g, proj[t[0]], proj[t[1]], proj[t[2]]);
    else
      fill_conservative(img, g, proj[t[0]], proj[t[1]], proj[t[2]]);
  }
  return img;
}

BinaryImage rasterize_material_area(const MaterialState& material, const CameraFrame& frame, int resolution,
                                    int depth_samples) {
  if (depth_samples < 2) throw InputError("depth_samples must be at least 2");
  if (resolution < 1) throw InputError("resolution must be positive");
  BinaryImage img(resolution);
  const RaySampler sampler(material, frame.view_dir);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const Vec3 origin = frame.lift(pixel_center(frame, resolution, col, row));
      img.at(col, row) = sampler.hits(origin, depth_samples) ? 1 : 0;
    }
  }
  return img;
}

std::size_t area_mismatch(const BinaryImage& a, const BinaryImage& b) {
  if (a.resolution != b.resolution || a.bits.size() != b.bits.size()) throw InputError("image resolutions differ");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) n += (a.bits[i] != 0) != (b.bits[i] != 0);
  return n;
}

void write_pgm(const BinaryImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << "P5\n" << image.resolution << ' ' << image.resolution << "\n255\n";
  for (auto b : image.bits) out.put(static_cast<char>(b ? 255 : 0));
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace hotwire

#include "hotwire/geom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hotwire {

void TriMesh::validate() const {
  if (triangles.empty()) throw InputError("mesh has no triangles");
  const int n = static_cast<int>(vertices.size());
  for (const auto& t : triangles)
    for (int i : t)
      if (i < 0 || i >= n) throw InputError("triangle index out of range");
  for (const auto& v : vertices)
    if (!v.allFinite()) throw InputError("non-finite vertex coordinate");
}

Vec3 TriMesh::bbox_min() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  for (const auto& v : vertices) lo = lo.cwiseMin(v);
  return lo;
}

Vec3 TriMesh::bbox_max() const {
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
  for (const auto& v : vertices) hi = hi.cwiseMax(v);
  return hi;
}

double TriMesh::d_bb() const {
  if (vertices.empty()) return 0.0;
  return (bbox_max() - bbox_min()).norm();
}

double TriMesh::surface_area() const {
  double a = 0.0;
  for (const auto& t : triangles)
    a += 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
  return a;
}

std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed) {
  mesh.validate();
  std::vector<double> cdf(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    total += 0.5 * (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]).norm();
    cdf[i] = total;
  }
  if (!(total > 0.0)) throw DegenerateGeometry("mesh has zero surface area");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = uni(rng) * total;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    i = std::min(i, cdf.size() - 1);
    double a = uni(rng), b = uni(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const auto& t = mesh.triangles[i];
    const Vec3& p = mesh.vertices[t[0]];
    out.push_back(p + a * (mesh.vertices[t[1]] - p) + b * (mesh.vertices[t[2]] - p));
  }
  return out;
}

TriMesh make_cylinder(double radius, double z0, double z1, int segments) {
  TriMesh m;
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * M_PI * i / segments;
    m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z0);
    m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z1);
  }
  const int bottom = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0.0, 0.0, z0);
  m.vertices.emplace_back(0.0, 0.0, z1);
  for (int i = 0; i < segments; ++i) {
    const int j = (i + 1) % segments;
    const int a0 = 2 * i, a1 = 2 * i + 1, b0 = 2 * j, b1 = 2 * j + 1;
    m.triangles.push_back({a0, b0, b1});
    m.triangles.push_back({a0, b1, a1});
    m.triangles.push_back({bottom, b0, a0});
    m.triangles.push_back({bottom + 1, a1, b1});
  }
  return m;
}

TriMesh make_box(const Vec3& lo, const Vec3& hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i)
    m.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

TriMesh merge(const TriMesh& a, const TriMesh& b) {
  TriMesh m = a;
  const int off = static_cast<int>(a.vertices.size());
  m.vertices.insert(m.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (const auto& t : b.triangles) m.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  return m;
}

}  // namespace hotwire

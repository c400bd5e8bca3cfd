#include "shapes.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace hotwire::test {

TriMesh icosphere(double radius, int subdivisions, const Vec3& centre) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriMesh m;
  for (const auto& p : v) m.vertices.push_back(centre + radius * p);
  m.triangles = std::move(f);
  return m;
}

TriMesh ellipsoid(const Vec3& radii, int subdivisions) {
  TriMesh m = icosphere(1.0, subdivisions);
  for (auto& p : m.vertices) p = p.cwiseProduct(radii);
  return m;
}

TriMesh bumpy_blob(double radius, double amplitude, int subdivisions) {
  TriMesh m = icosphere(1.0, subdivisions);
  for (auto& p : m.vertices) {
    const double bumps = std::sin(3.0 * p.x()) * std::cos(2.0 * p.y()) + 0.5 * std::sin(4.0 * p.z() + 1.0);
    p *= radius * (1.0 + amplitude * bumps);
  }
  return m;
}

TriMesh holed_icosphere(double radius, int removed) {
  TriMesh m = icosphere(radius, 3);
  const std::size_t stride = m.triangles.size() / static_cast<std::size_t>(removed);
  std::vector<std::array<int, 3>> kept;
  for (std::size_t i = 0; i < m.triangles.size(); ++i)
    if (i % stride != 0) kept.push_back(m.triangles[i]);
  m.triangles = std::move(kept);
  return m;
}

Polygon2 regular_polygon(int n, double radius, const Vec2& centre) {
  std::vector<Vec2> v;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    v.push_back(centre + radius * Vec2(std::cos(a), std::sin(a)));
  }
  return Polygon2(std::move(v));
}

Polygon2 star_polygon(int arms, double outer, double inner, int vertices) {
  std::vector<Vec2> tips;
  for (int k = 0; k < 2 * arms; ++k) {
    const double a = M_PI * k / arms;
    const double r = k % 2 == 0 ? outer : inner;
    tips.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  const int per_edge = vertices / (2 * arms);
  std::vector<Vec2> v;
  for (int k = 0; k < 2 * arms; ++k) {
    const Vec2& a = tips[k];
    const Vec2& b = tips[(k + 1) % tips.size()];
    for (int i = 0; i < per_edge; ++i) v.push_back(a + (b - a) * (static_cast<double>(i) / per_edge));
  }
  return Polygon2(std::move(v));
}

ClosedBSpline2 circle_spline(int n, double radius, const Vec2& centre) {
  std::vector<Vec2> unit;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    unit.emplace_back(std::cos(a), std::sin(a));
  }
  // Rescale so the sampled mean radius matches.
  const auto probe = ClosedBSpline2::uniform(3, unit).sample(4096);
  double mean = 0.0;
  for (const auto& p : probe) mean += p.norm();
  mean /= static_cast<double>(probe.size());
  for (auto& p : unit) p = centre + (radius / mean) * p;
  return ClosedBSpline2::uniform(3, std::move(unit));
}

}  // namespace hotwire::test

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "hotwire/material/material.hpp"

namespace hotwire {

bool is_closed_orientable(const TriMesh& mesh) {
  // Directed edge counts; a closed orientable surface uses every directed
  // edge once and its reverse once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (a == b) return false;
      if (++directed[{a, b}] > 1) return false;
    }
  }
  for (const auto& [e, n] : directed)
    if (!directed.count({e.second, e.first})) return false;
  return true;
}

double mesh_volume(const TriMesh& mesh) {
  mesh.validate();
  if (!is_closed_orientable(mesh)) return voxel_volume(mesh);
  double v = 0.0;
  for (const auto& t : mesh.triangles)
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  return std::abs(v) / 6.0;
}

double voxel_volume(const TriMesh& mesh, int res) {
  mesh.validate();
  const Vec3 pad = Vec3::Constant(1e-3 * std::max(mesh.d_bb(), 1e-12));
  const Vec3 lo = mesh.bbox_min() - pad, hi = mesh.bbox_max() + pad;
  const Vec3 cell = (hi - lo) / res;
  const std::size_t n = static_cast<std::size_t>(res);
  std::vector<std::uint8_t> votes(n * n * n, 0);
  auto centre = [&](int k, int i) { return lo[k] + (i + 0.5) * cell[k]; };
  for (int axis = 0; axis < 3; ++axis) {
    const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
    std::vector<std::vector<double>> hits(n * n);
    for (const auto& t : mesh.triangles) {
      Vec2 p[3];
      for (int k = 0; k < 3; ++k) p[k] = Vec2(mesh.vertices[t[k]][ua], mesh.vertices[t[k]][va]);
      double area = cross2(p[1] - p[0], p[2] - p[0]);
      if (area == 0.0) continue;
      int o1 = 1, o2 = 2;
      if (area < 0.0) std::swap(o1, o2);
      const Vec2 a = p[0], b = p[o1], c = p[o2];
      const double wa = mesh.vertices[t[0]][axis], wb = mesh.vertices[t[o1]][axis], wc = mesh.vertices[t[o2]][axis];
      const double A = std::abs(area);
      const Vec2 bl = a.cwiseMin(b).cwiseMin(c), bh = a.cwiseMax(b).cwiseMax(c);
      const int u0 = std::max(0, static_cast<int>(std::floor((bl.x() - lo[ua]) / cell[ua] - 0.5)));
      const int u1 = std::min(res - 1, static_cast<int>(std::ceil((bh.x() - lo[ua]) / cell[ua] - 0.5)));
      const int v0 = std::max(0, static_cast<int>(std::floor((bl.y() - lo[va]) / cell[va] - 0.5)));
      const int v1 = std::min(res - 1, static_cast<int>(std::ceil((bh.y() - lo[va]) / cell[va] - 0.5)));
      auto owns = [](const Vec2& s, const Vec2& e, double f) {
        if (f != 0.0) return f > 0.0;
        const Vec2 d = e - s;
        return d.y() < 0.0 || (d.y() == 0.0 && d.x() < 0.0);
      };
      for (int iu = u0; iu <= u1; ++iu) {
        for (int iv = v0; iv <= v1; ++iv) {
          const Vec2 q(centre(ua, iu), centre(va, iv));
          const double fa = cross2(c - b, q - b), fb = cross2(a - c, q - c), fc = cross2(b - a, q - a);
          if (!owns(b, c, fa) || !owns(c, a, fb) || !owns(a, b, fc)) continue;
          hits[static_cast<std::size_t>(iu) * n + iv].push_back((fa * wa + fb * wb + fc * wc) / A);
        }
      }
    }
    for (int iu = 0; iu < res; ++iu) {
      for (int iv = 0; iv < res; ++iv) {
        auto& h = hits[static_cast<std::size_t>(iu) * n + iv];
        if (h.empty()) continue;
        std::sort(h.begin(), h.end());
        std::size_t next = 0;
        for (int iw = 0; iw < res; ++iw) {
          const double w = centre(axis, iw);
          while (next < h.size() && h[next] <= w) ++next;
          if (next % 2 == 0) continue;
          int idx[3];
          idx[axis] = iw;
          idx[ua] = iu;
          idx[va] = iv;
          ++votes[(static_cast<std::size_t>(idx[0]) * n + idx[1]) * n + idx[2]];
        }
      }
    }
  }
  const std::size_t inside = static_cast<std::size_t>(std::count_if(votes.begin(), votes.end(), [](auto v) { return v >= 2; }));
  return static_cast<double>(inside) * cell.prod();
}

TriMesh extract_surface_mesh(const MaterialState& material, int res) {
  if (res < 16) throw InputError("surface grid resolution must be at least 16");
  // Cell-centred samples plus one padding layer on each side.
  const int m = res + 2;
  const double h = 2.0 * kBoxHalf / res;
  auto coord = [&](int i) { return -kBoxHalf + (i - 0.5) * h; };
  auto point = [&](int i, int j, int k) { return Vec3(coord(i), coord(j), coord(k)); };
  auto lin = [m](int i, int j, int k) { return (static_cast<std::size_t>(k) * m + j) * m + i; };
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(m) * m * m, 0);
  bool any = false;
  for (int k = 1; k <= res; ++k)
    for (int j = 1; j <= res; ++j)
      for (int i = 1; i <= res; ++i) {
        const bool in = material.contains_in_box(point(i, j, k));
        inside[lin(i, j, k)] = in;
        any = any || in;
      }
  if (!any) throw InvalidState("material is empty at this grid resolution");

  TriMesh out;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  auto vertex_on = [&](std::size_t a, const Vec3& pa, std::size_t b, const Vec3& pb) {
    // a inside, b outside
    const std::uint64_t key = std::min(a, b) * static_cast<std::uint64_t>(inside.size()) + std::max(a, b);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    Vec3 in = pa, outp = pb;
    for (int it2 = 0; it2 < 30; ++it2) {
      const Vec3 mid = 0.5 * (in + outp);
      if (material.contains_in_box(mid))
        in = mid;
      else
        outp = mid;
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (in + outp));
    edge_vertex.emplace(key, id);
    return id;
  };
  auto emit = [&](int a, int b, int c, const Vec3& from_in) {
    if (a == b || b == c || a == c) return;
    const Vec3 n = (out.vertices[b] - out.vertices[a]).cross(out.vertices[c] - out.vertices[a]);
    if (n.squaredNorm() == 0.0) return;
    if (n.dot(from_in) < 0.0) std::swap(b, c);
    out.triangles.push_back({a, b, c});
  };
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k + 1 < m; ++k)
    for (int j = 0; j + 1 < m; ++j)
      for (int i = 0; i + 1 < m; ++i) {
        int corners = 0;
        for (int c = 0; c < 8; ++c) corners += inside[lin(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))];
        if (corners == 0 || corners == 8) continue;
        for (const auto& perm : perms) {
          int ids[4][3];
          ids[0][0] = i, ids[0][1] = j, ids[0][2] = k;
          for (int s = 0; s < 3; ++s) {
            for (int d = 0; d < 3; ++d) ids[s + 1][d] = ids[s][d];
            ids[s + 1][perm[s]] += 1;
          }
          std::size_t key[4];
          Vec3 pos[4];
          bool in[4];
          int nin = 0;
          for (int v = 0; v < 4; ++v) {
            key[v] = lin(ids[v][0], ids[v][1], ids[v][2]);
            pos[v] = point(ids[v][0], ids[v][1], ids[v][2]);
            in[v] = inside[key[v]];
            nin += in[v];
          }
          if (nin == 0 || nin == 4) continue;
          int I[4], O[4], ni = 0, no = 0;
          for (int v = 0; v < 4; ++v) (in[v] ? I[ni++] : O[no++]) = v;
          Vec3 ci = Vec3::Zero(), co = Vec3::Zero();
          for (int v = 0; v < ni; ++v) ci += pos[I[v]] / ni;
          for (int v = 0; v < no; ++v) co += pos[O[v]] / no;
          const Vec3 dir = co - ci;
          auto ev = [&](int a, int b) { return vertex_on(key[a], pos[a], key[b], pos[b]); };
          if (ni == 1) {
            emit(ev(I[0], O[0]), ev(I[0], O[1]), ev(I[0], O[2]), dir);
          } else if (ni == 3) {
            emit(ev(I[0], O[0]), ev(I[1], O[0]), ev(I[2], O[0]), dir);
          } else {
            const int a = ev(I[0], O[0]), b = ev(I[0], O[1]), c = ev(I[1], O[1]), d = ev(I[1], O[0]);
            emit(a, b, c, dir);
            emit(a, c, d, dir);
          }
        }
      }
  return out;
}

}  // namespace hotwire

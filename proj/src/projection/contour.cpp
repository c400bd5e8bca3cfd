#include "hotwire/projection/contour.hpp"

#include <array>

namespace hotwire {

namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

}  // namespace

std::vector<LatticeLoop> trace_loops(const BinaryImage& image) {
  const int res = image.resolution;
  const int w = res + 1;
  auto set = [&](int col, int row) { return col >= 0 && row >= 0 && col < res && row < res && image.at(col, row); };
  // out[v] bit d: directed boundary edge leaving lattice vertex v in direction d.
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * w, 0);
  auto vid = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      if (!image.at(col, row)) continue;
      const int x = col, y = res - row - 1;  // lower-left corner
      if (!set(col, row + 1)) out[vid(x, y)] |= 1 << 0;
      if (!set(col + 1, row)) out[vid(x + 1, y)] |= 1 << 1;
      if (!set(col, row - 1)) out[vid(x + 1, y + 1)] |= 1 << 2;
      if (!set(col - 1, row)) out[vid(x, y + 1)] |= 1 << 3;
    }
  }
  std::vector<LatticeLoop> loops;
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < w; ++x) {
      while (out[vid(x, y)]) {
        int d = 0;
        while (!(out[vid(x, y)] & (1 << d))) ++d;
        LatticeLoop loop;
        int cx = x, cy = y;
        int prev = -1;
        long long area2 = 0;
        while (out[vid(cx, cy)]) {
          const std::uint8_t bits = out[vid(cx, cy)];
          int next = -1;
          if (prev < 0) {
            next = d;
          } else {
            const bool at_start = cx == x && cy == y;
            for (int turn : {1, 0, 3}) {
              const int cand = (prev + turn) % 4;
              if ((bits & (1 << cand)) || (at_start && cand == d)) {
                next = cand;
                break;
              }
            }
            if (next < 0 || (at_start && next == d)) break;
          }
          out[vid(cx, cy)] = static_cast<std::uint8_t>(bits & ~(1 << next));
          if (next != prev) loop.vertices.emplace_back(cx, cy);
          const int nx = cx + kDx[next], ny = cy + kDy[next];
          area2 += static_cast<long long>(cx) * ny - static_cast<long long>(nx) * cy;
          cx = nx;
          cy = ny;
          prev = next;
        }
        // The start vertex is a corner only when the path turns there.
        if (loop.vertices.size() > 1 && prev == d) loop.vertices.erase(loop.vertices.begin());
        loop.signed_area = 0.5 * static_cast<double>(area2);
        loops.push_back(std::move(loop));
      }
    }
  }
  return loops;
}

Vec2 lattice_to_plane(const CameraFrame& frame, int resolution, const Vec2& lattice) {
  const double s = frame.scale;
  return {-s + 2.0 * s * lattice.x() / resolution, -s + 2.0 * s * lattice.y() / resolution};
}

Polygon2 extract_outer_contour(const BinaryImage& image, const CameraFrame& frame) {
  const auto loops = trace_loops(image);
  const LatticeLoop* best = nullptr;
  for (const auto& l : loops)
    if (l.signed_area > 0.0 && (!best || l.signed_area > best->signed_area)) best = &l;
  if (!best) throw InputError("image has no set pixels");
  std::vector<Vec2> pts;
  pts.reserve(best->vertices.size());
  for (const auto& v : best->vertices) pts.push_back(lattice_to_plane(frame, image.resolution, v));
  return Polygon2(std::move(pts));
}

std::size_t fill_diagonal_gaps(BinaryImage& image) {
  const int res = image.resolution;
  std::size_t added = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int row = 0; row + 1 < res; ++row) {
      for (int col = 0; col + 1 < res; ++col) {
        const bool a = image.at(col, row), b = image.at(col + 1, row);
        const bool c = image.at(col, row + 1), d = image.at(col + 1, row + 1);
        if ((a && d && !b && !c) || (b && c && !a && !d)) {
          image.at(col, row) = image.at(col + 1, row) = image.at(col, row + 1) = image.at(col + 1, row + 1) = 1;
          added += 2;
          changed = true;
        }
      }
    }
  }
  return added;
}

}  // namespace hotwire

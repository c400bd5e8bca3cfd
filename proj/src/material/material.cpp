#include "hotwire/material/material.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace hotwire {

bool Workbench::contains(const Vec3& p) const {
  return p.z() >= z_bottom && p.z() <= z_top && p.x() * p.x() + p.y() * p.y() <= radius * radius;
}

TriMesh Workbench::mesh(int segments) const { return make_cylinder(radius, z_bottom, z_top, segments); }

PrismCut::PrismCut(CameraFrame frame, ClosedBSpline2 curve, std::string kind)
    : frame_(std::move(frame)),
      curve_(std::move(curve)),
      kind_(std::move(kind)),
      locator_(std::make_shared<PolygonLocator>(curve_.sample(kCurvePolygonSamples))) {}

bool in_box(const Vec3& p) { return p.cwiseAbs().maxCoeff() <= kBoxHalf; }

bool MaterialState::inside_cuts(const Vec3& p) const {
  for (const auto& c : cuts_)
    if (!c.contains(p)) return false;
  return true;
}

bool MaterialState::contains(const Vec3& p) const {
  if (!in_box(p) && !(workbench_ && workbench_->contains(p))) return false;
  return inside_cuts(p);
}

bool MaterialState::contains_in_box(const Vec3& p) const { return in_box(p) && inside_cuts(p); }

Vec3 MaterialState::bounds_min() const {
  Vec3 lo = Vec3::Constant(-kBoxHalf);
  if (workbench_) lo = lo.cwiseMin(Vec3(-workbench_->radius, -workbench_->radius, workbench_->z_bottom));
  return lo;
}

Vec3 MaterialState::bounds_max() const {
  Vec3 hi = Vec3::Constant(kBoxHalf);
  if (workbench_) hi = hi.cwiseMax(Vec3(workbench_->radius, workbench_->radius, workbench_->z_top));
  return hi;
}

MaterialState MaterialState::with_cut(PrismCut cut) const {
  MaterialState m = *this;
  m.cuts_.push_back(std::move(cut));
  return m;
}

bool cut_encloses(const PrismCut& cut, const TriMesh& mesh) {
  std::vector<Vec2> proj(mesh.vertices.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    proj[i] = cut.frame().project(mesh.vertices[i]);
    if (!cut.contains_projected(proj[i])) return false;
  }
  // With all vertices inside, a triangle leaves the region only if one of its
  // edges crosses the boundary.
  const SegmentGrid grid = SegmentGrid::from_ring(cut.polygon());
  std::map<std::pair<int, int>, char> seen;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(t[k], t[(k + 1) % 3]), b = std::max(t[k], t[(k + 1) % 3]);
      if (!seen.emplace(std::make_pair(a, b), 1).second) continue;
      if (grid.segment_hits(proj[a], proj[b])) return false;
    }
  }
  return true;
}

MaterialState apply_cut(const MaterialState& material, PrismCut cut, const TriMesh* mesh) {
  if (mesh && !cut_encloses(cut, *mesh)) throw InvalidState("cut does not enclose the mesh silhouette");
  return material.with_cut(std::move(cut));
}

VolumeEstimate estimate_volume(const MaterialState& material, std::size_t sample_budget, std::uint64_t seed) {
  if (sample_budget < 1000) throw InputError("volume sample budget must be at least 1000");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-kBoxHalf, kBoxHalf);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < sample_budget; ++i) {
    const double x = uni(rng), y = uni(rng), z = uni(rng);
    inside += material.contains_in_box(Vec3(x, y, z));
  }
  const double n = static_cast<double>(sample_budget);
  const double p = static_cast<double>(inside) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

bool termination_check(double material_volume, double mesh_volume, double alpha) {
  return material_volume - mesh_volume < alpha;
}

bool termination_check(const MaterialState& material, const TriMesh& mesh, double alpha, std::size_t sample_budget,
                       std::uint64_t seed) {
  return termination_check(estimate_volume(material, sample_budget, seed).volume, mesh_volume(mesh), alpha);
}

RaySampler::RaySampler(const MaterialState& material, const Vec3& view_dir) : material_(material), dir_(view_dir) {
  for (const auto& cut : material.cuts()) {
    CutLine line;
    line.cut = &cut;
    const Vec2 b = cut.frame().project(view_dir);
    line.speed = b.norm();
    if (line.speed < 1e-12) {
      line.constant = true;
      lines_.push_back(std::move(line));
      continue;
    }
    line.axis = b / line.speed;
    const auto& ring = cut.polygon();
    const std::size_t n = ring.size();
    line.along.resize(n);
    line.perp.resize(n);
    double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
    for (std::size_t i = 0; i < n; ++i) {
      line.along[i] = line.axis.dot(ring[i]);
      line.perp[i] = cross2(line.axis, ring[i]);
      pmin = std::min(pmin, line.perp[i]);
      pmax = std::max(pmax, line.perp[i]);
    }
    const int nbins = 512;
    line.pmin = pmin;
    line.bin_width = std::max((pmax - pmin) / nbins, 1e-15);
    line.bins.assign(nbins, {});
    for (std::size_t i = 0; i < n; ++i) {
      const double p0 = line.perp[i], p1 = line.perp[(i + 1) % n];
      const int b0 = std::clamp(static_cast<int>((std::min(p0, p1) - pmin) / line.bin_width), 0, nbins - 1);
      const int b1 = std::clamp(static_cast<int>((std::max(p0, p1) - pmin) / line.bin_width), 0, nbins - 1);
      for (int k = b0; k <= b1; ++k) line.bins[k].push_back(static_cast<int>(i));
    }
    lines_.push_back(std::move(line));
  }
}

void RaySampler::cut_intervals(const CutLine& line, const Vec3& origin, std::vector<double>& out) const {
  out.clear();
  const Vec2 a = line.cut->frame().project(origin);
  if (line.constant) {
    if (line.cut->contains_projected(a)) {
      out.push_back(-std::numeric_limits<double>::infinity());
      out.push_back(std::numeric_limits<double>::infinity());
    }
    return;
  }
  const double c = cross2(line.axis, a);
  const double a0 = line.axis.dot(a);
  const double rel = (c - line.pmin) / line.bin_width;
  if (rel < 0.0 || rel > static_cast<double>(line.bins.size())) return;
  const int bin = std::min(static_cast<int>(rel), static_cast<int>(line.bins.size()) - 1);
  const std::size_t n = line.along.size();
  for (int i : line.bins[bin]) {
    const std::size_t j = (static_cast<std::size_t>(i) + 1) % n;
    const double p0 = line.perp[i], p1 = line.perp[j];
    if ((p0 > c) == (p1 > c)) continue;
    const double s = (c - p0) / (p1 - p0);
    const double al = line.along[i] + s * (line.along[j] - line.along[i]);
    out.push_back((al - a0) / line.speed);
  }
  std::sort(out.begin(), out.end());
  if (out.size() % 2) out.pop_back();
}

namespace {

// Parameter interval of the ray inside an axis-aligned box.
bool clip_box(const Vec3& o, const Vec3& d, const Vec3& lo, const Vec3& hi, double& t0, double& t1) {
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (o[k] < lo[k] || o[k] > hi[k]) return false;
      continue;
    }
    double a = (lo[k] - o[k]) / d[k], b = (hi[k] - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  return t0 <= t1;
}

bool clip_cylinder(const Vec3& o, const Vec3& d, const Workbench& w, double& t0, double& t1) {
  if (!clip_box(o, d, Vec3(-w.radius, -w.radius, w.z_bottom), Vec3(w.radius, w.radius, w.z_top), t0, t1)) return false;
  const double A = d.x() * d.x() + d.y() * d.y();
  const double B = o.x() * d.x() + o.y() * d.y();
  const double C = o.x() * o.x() + o.y() * o.y() - w.radius * w.radius;
  if (A < 1e-15) return C <= 0.0;
  const double disc = B * B - A * C;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  t0 = std::max(t0, (-B - sq) / A);
  t1 = std::min(t1, (-B + sq) / A);
  return t0 <= t1;
}

// Intersection of two sorted disjoint interval lists.
void intersect(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i + 1 < a.size() && j + 1 < b.size()) {
    const double lo = std::max(a[i], b[j]), hi = std::min(a[i + 1], b[j + 1]);
    if (lo <= hi) {
      out.push_back(lo);
      out.push_back(hi);
    }
    if (a[i + 1] < b[j + 1])
      i += 2;
    else
      j += 2;
  }
}

}  // namespace

bool RaySampler::hits(const Vec3& origin, int depth_samples) const {
  double T0, T1;
  if (!clip_box(origin, dir_, material_.bounds_min(), material_.bounds_max(), T0, T1)) return false;
  current_.clear();
  double b0, b1;
  if (clip_box(origin, dir_, Vec3::Constant(-kBoxHalf), Vec3::Constant(kBoxHalf), b0, b1)) {
    current_.push_back(b0);
    current_.push_back(b1);
  }
  if (material_.workbench()) {
    double w0, w1;
    if (clip_cylinder(origin, dir_, *material_.workbench(), w0, w1)) {
      if (current_.empty()) {
        current_ = {w0, w1};
      } else if (w1 < current_[0]) {
        current_.insert(current_.begin(), {w0, w1});
      } else if (w0 > current_[1]) {
        current_.insert(current_.end(), {w0, w1});
      } else {
        current_[0] = std::min(current_[0], w0);
        current_[1] = std::max(current_[1], w1);
      }
    }
  }
  for (const auto& line : lines_) {
    if (current_.empty()) return false;
    cut_intervals(line, origin, scratch_);
    intersect(current_, scratch_, next_);
    std::swap(current_, next_);
  }
  if (depth_samples < 2) throw InputError("depth_samples must be at least 2");
  const double step = (T1 - T0) / (depth_samples - 1);
  for (std::size_t i = 0; i + 1 < current_.size(); i += 2) {
    const double lo = current_[i], hi = current_[i + 1];
    if (step <= 0.0) {
      if (lo <= T0 && T0 <= hi) return true;
      continue;
    }
    const double k = std::max(0.0, std::ceil((lo - T0) / step));
    if (k <= depth_samples - 1 && T0 + k * step <= hi) return true;
  }
  return false;
}

}  // namespace hotwire

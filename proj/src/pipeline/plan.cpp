#include "hotwire/pipeline/plan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hotwire/projection/contour.hpp"
#include "hotwire/projection/raster.hpp"
#include "hotwire/viewpoint/candidates.hpp"

namespace hotwire {

using json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void say(const PlanHooks& hooks, const std::string& msg) {
  if (hooks.log) hooks.log(msg);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Image half-extent that covers everything the material can contain.
double frame_scale_for(const MaterialState& material) {
  const Vec3 lo = material.bounds_min(), hi = material.bounds_max();
  double r = 0.0;
  for (int c = 0; c < 8; ++c) {
    const Vec3 p((c & 1) ? hi.x() : lo.x(), (c & 2) ? hi.y() : lo.y(), (c & 4) ? hi.z() : lo.z());
    r = std::max(r, p.norm());
  }
  return std::max(kFrameScale, 1.1 * r);
}

double point_triangle_distance2(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return ap.squaredNorm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return bp.squaredNorm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + d1 / (d1 - d3) * ab)).squaredNorm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return cp.squaredNorm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + d2 / (d2 - d6) * ac)).squaredNorm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).squaredNorm();
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).squaredNorm();
}

CutRecord contour_cut(const Viewpoint& vp, const TriMesh& target, const PlanConfig& cfg, double scale,
                      BinaryImage& image, std::optional<FitResult>& fr) {
  CutRecord rec;
  rec.viewpoint = vp;
  rec.frame = camera_frame(vp, scale);
  image = rasterize_mesh_area(target, rec.frame, cfg.resolution, Coverage::Conservative);
  fill_diagonal_gaps(image);
  const std::vector<LatticeLoop> loops = trace_loops(image);
  const LatticeLoop* outer = nullptr;
  int outers = 0;
  for (const auto& l : loops) {
    if (l.signed_area > 0.0) {
      ++outers;
      outer = &l;
    }
  }
  if (outers != 1) throw DegenerateGeometry("silhouette has " + std::to_string(outers) + " components");
  for (const auto& v : outer->vertices) rec.contour.push_back(lattice_to_plane(rec.frame, cfg.resolution, v));
  FitConfig fc = cfg.fit;
  fc.contour_unit = 2.0 * scale / cfg.resolution;
  fr = fit(Polygon2(rec.contour), fc);
  rec.curve = fr->curve;
  rec.d_avg = fr->d_avg;
  rec.fit_iterations = fr->iterations;
  return rec;
}

}  // namespace

Normalized normalize_input(const TriMesh& mesh, bool fill, bool align_bottom) {
  mesh.validate();
  const Vec3 lo = mesh.bbox_min(), hi = mesh.bbox_max();
  const double extent = (hi - lo).maxCoeff();
  if (!(extent > 0.0)) throw DegenerateGeometry("mesh has zero extent");
  const Vec3 c = 0.5 * (lo + hi);
  double s = 2.0 * kBoxHalf * 0.96 / extent;
  if (!fill) s = std::min(1.0, s);
  Vec3 offset = -s * c;
  if (align_bottom) offset.z() = -kBoxHalf - s * lo.z();
  Transform t = Transform::Identity();
  t.topLeftCorner<3, 3>() *= s;
  t.topRightCorner<3, 1>() = offset;
  return {apply(t, mesh), t};
}

Vec3 apply(const Transform& t, const Vec3& p) { return t.topLeftCorner<3, 3>() * p + t.topRightCorner<3, 1>(); }

TriMesh apply(const Transform& t, const TriMesh& mesh) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = apply(t, v);
  return out;
}

Vec3 RuledSurface::c0(double u) const { return frame.lift(curve.eval(u)) - half_length * frame.view_dir; }
Vec3 RuledSurface::c1(double u) const { return frame.lift(curve.eval(u)) + half_length * frame.view_dir; }
Vec3 RuledSurface::at(double u, double v) const { return (1.0 - v) * c0(u) + v * c1(u); }

TriMesh RuledSurface::mesh(int samples, double clamp_half_length) const {
  if (samples < 3) throw InputError("ruled surface needs at least 3 samples");
  const double h = clamp_half_length > 0.0 ? std::min(half_length, clamp_half_length) : half_length;
  TriMesh m;
  for (int i = 0; i < samples; ++i) {
    const Vec3 p = frame.lift(curve.eval(static_cast<double>(i) / samples));
    m.vertices.push_back(p - h * frame.view_dir);
    m.vertices.push_back(p + h * frame.view_dir);
  }
  for (int i = 0; i < samples; ++i) {
    const int j = (i + 1) % samples;
    m.triangles.push_back({2 * i, 2 * j, 2 * j + 1});
    m.triangles.push_back({2 * i, 2 * j + 1, 2 * i + 1});
  }
  return m;
}

RuledSurface extrude_ruled_surface(const ClosedBSpline2& curve, const CameraFrame& frame) {
  return {frame, curve, std::max(1.0, frame.position.norm())};
}

PrismCut bottom_plane_cut(double bottom) {
  const CameraFrame frame = camera_frame(Viewpoint{0.0, 0.0, 2.0});
  const double far = 4.0;
  const double b = bottom - 1e-9;
  const Vec2 corners[4] = {{-far, b}, {far, b}, {far, far}, {-far, far}};
  std::vector<Vec2> pts;
  for (const auto& c : corners)
    for (int k = 0; k < 3; ++k) pts.push_back(c);
  return PrismCut(frame, ClosedBSpline2::uniform(3, std::move(pts)), "bottom_plane");
}

CutPlan plan(const TriMesh& mesh, const PlanConfig& cfg, const FabricationOptions& fab, const PlanHooks& hooks) {
  mesh.validate();
  cfg.ga.validate();
  cfg.fit.validate();
  if (cfg.max_cuts < 0 || cfg.max_failures < 1 || cfg.resolution < 8 || cfg.n_candidates < 1)
    throw InputError("invalid plan configuration");

  CutPlan out;
  out.config = cfg;
  out.fabrication = fab;
  out.mesh_volume = mesh_volume(mesh);

  MaterialState material(fab.workbench ? std::optional<Workbench>(fab.bench) : std::nullopt);
  const TriMesh target = fab.workbench ? merge(mesh, fab.bench.mesh()) : mesh;
  const double scale = frame_scale_for(material);
  const double alpha = cfg.relative_alpha ? cfg.alpha * out.mesh_volume : cfg.alpha;

  const CandidateSet all = fibonacci_sample(cfg.n_candidates, cfg.view_radius);
  std::vector<int> pool;
  if (cfg.hemisphere || fab.workbench) {
    pool = upper_hemisphere(all);
  } else {
    pool.resize(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) pool[i] = static_cast<int>(i);
  }

  VolumeEstimate vol = estimate_volume(material, cfg.volume_samples, cfg.volume_seed);
  out.initial_volume = vol.volume;
  FitnessOptions fopt{cfg.resolution, cfg.depth_samples, scale};

  while (out.termination.empty()) {
    if (termination_check(vol.volume, out.mesh_volume, alpha)) {
      out.termination = "alpha";
      break;
    }
    if (static_cast<int>(out.cuts.size()) >= cfg.max_cuts) {
      out.termination = "max_iters";
      break;
    }
    const int index = static_cast<int>(out.cuts.size());
    std::vector<int> available = pool;
    bool placed = false;
    for (int failures = 0; !placed;) {
      if (available.empty()) {
        out.termination = "aborted";
        break;
      }
      const CandidateSet cs = subset(all, available);
      GAConfig g = cfg.ga;
      g.n_pop = std::min<int>(g.n_pop, static_cast<int>(cs.size()));
      g.seed = mix(cfg.seed ^ mix(static_cast<std::uint64_t>(index) * 131 + failures));
      const GAResult r = run_ga(cs, material, target, g, fopt);
      std::ostringstream os;
      os << "cut " << index + 1 << ": view phi=" << r.viewpoint.phi << " theta=" << r.viewpoint.theta
         << " fitness=" << r.fitness << " evaluations=" << r.evaluations;
      say(hooks, os.str());
      try {
        BinaryImage image;
        std::optional<FitResult> fr;
        CutRecord rec = contour_cut(r.viewpoint, target, cfg, scale, image, fr);
        rec.fitness = r.fitness;
        rec.ga_evaluations = r.evaluations;
        material = apply_cut(material, rec.to_cut(), &target);
        vol = estimate_volume(material, cfg.volume_samples, cfg.volume_seed);
        rec.volume = vol.volume;
        rec.volume_stderr = vol.standard_error;
        out.cuts.push_back(std::move(rec));
        if (hooks.on_cut) hooks.on_cut(index, image, out.cuts.back(), *fr);
        placed = true;
      } catch (const Error& e) {
        say(hooks, std::string("cut ") + std::to_string(index + 1) + ": viewpoint rejected: " + e.what());
        available.erase(available.begin() + r.best);
        if (++failures >= cfg.max_failures) out.termination = "aborted";
        if (!out.termination.empty()) break;
      }
    }
  }

  if (fab.bottom_plane && out.termination != "aborted") {
    CutRecord rec;
    const PrismCut cut = bottom_plane_cut(-kBoxHalf);
    rec.kind = cut.kind();
    rec.frame = cut.frame();
    rec.viewpoint = Viewpoint{0.0, 0.0, cfg.view_radius};
    rec.curve = cut.curve();
    material = apply_cut(material, cut);
    vol = estimate_volume(material, cfg.volume_samples, cfg.volume_seed);
    rec.volume = vol.volume;
    rec.volume_stderr = vol.standard_error;
    out.cuts.push_back(std::move(rec));
  }
  return out;
}

MaterialState replay(const CutPlan& p) {
  MaterialState m(p.fabrication.workbench ? std::optional<Workbench>(p.fabrication.bench) : std::nullopt);
  for (const auto& c : p.cuts) m = m.with_cut(c.to_cut());
  return m;
}

double mean_surface_distance(const TriMesh& from, const TriMesh& to, std::size_t samples, std::uint64_t seed) {
  to.validate();
  const std::vector<Vec3> pts = sample_surface(from, samples, seed);
  std::vector<Vec3> lo(to.triangles.size()), hi(to.triangles.size());
  for (std::size_t t = 0; t < to.triangles.size(); ++t) {
    const auto& tri = to.triangles[t];
    lo[t] = to.vertices[tri[0]].cwiseMin(to.vertices[tri[1]]).cwiseMin(to.vertices[tri[2]]);
    hi[t] = to.vertices[tri[0]].cwiseMax(to.vertices[tri[1]]).cwiseMax(to.vertices[tri[2]]);
  }
  double sum = 0.0;
  for (const auto& p : pts) {
    double best = kInf;
    for (std::size_t t = 0; t < to.triangles.size(); ++t) {
      const Vec3 gap = (lo[t] - p).cwiseMax(p - hi[t]).cwiseMax(0.0);
      if (gap.squaredNorm() >= best) continue;
      const auto& tri = to.triangles[t];
      best = std::min(best, point_triangle_distance2(p, to.vertices[tri[0]], to.vertices[tri[1]], to.vertices[tri[2]]));
    }
    sum += std::sqrt(best);
  }
  return pts.empty() ? 0.0 : sum / static_cast<double>(pts.size());
}

SimulationReport simulate(const CutPlan& p, const TriMesh& mesh, int grid_resolution, bool per_cut_distance) {
  constexpr std::size_t kDistanceSamples = 4000;
  const std::size_t budget = p.config.volume_samples;
  const std::uint64_t seed = p.config.volume_seed;
  SimulationReport rep;
  MaterialState m(p.fabrication.workbench ? std::optional<Workbench>(p.fabrication.bench) : std::nullopt);
  auto record = [&](bool last) {
    const VolumeEstimate v = estimate_volume(m, budget, seed);
    rep.volumes.push_back(v.volume);
    rep.volume_stderr.push_back(v.standard_error);
    if (last) {
      rep.remnant = extract_surface_mesh(m, grid_resolution);
      rep.d_result_avg.push_back(mean_surface_distance(rep.remnant, mesh, kDistanceSamples, seed));
    } else if (per_cut_distance) {
      const TriMesh s = extract_surface_mesh(m, std::max(32, grid_resolution / 2));
      rep.d_result_avg.push_back(mean_surface_distance(s, mesh, kDistanceSamples, seed));
    }
  };
  record(p.cuts.empty());
  for (std::size_t i = 0; i < p.cuts.size(); ++i) {
    m = m.with_cut(p.cuts[i].to_cut());
    record(i + 1 == p.cuts.size());
  }
  return rep;
}

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec3 vec3(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
Vec2 vec2(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json frame_json(const CameraFrame& f) {
  return {{"position", vec(f.position)}, {"view_dir", vec(f.view_dir)}, {"right", vec(f.right)},
          {"up", vec(f.up)},             {"scale", f.scale}};
}

CameraFrame frame_from(const json& j) {
  CameraFrame f;
  f.position = vec3(j.at("position"));
  f.view_dir = vec3(j.at("view_dir"));
  f.right = vec3(j.at("right"));
  f.up = vec3(j.at("up"));
  f.scale = j.at("scale").get<double>();
  return f;
}

json ga_json(const GAConfig& g) {
  return {{"n_pop", g.n_pop},       {"p_uni", g.p_uni},       {"p_geo", g.p_geo},
          {"p_nei", g.p_nei},       {"p_father", g.p_father}, {"p_glo", g.p_glo},
          {"p_loc", g.p_loc},       {"t_slerp", g.t_slerp},   {"n_max", g.n_max},
          {"n_converge", g.n_converge}, {"dedup_retries", g.dedup_retries}, {"seed", g.seed}};
}

GAConfig ga_from(const json& j) {
  GAConfig g;
  g.n_pop = j.value("n_pop", g.n_pop);
  g.p_uni = j.value("p_uni", g.p_uni);
  g.p_geo = j.value("p_geo", g.p_geo);
  g.p_nei = j.value("p_nei", g.p_nei);
  g.p_father = j.value("p_father", g.p_father);
  g.p_glo = j.value("p_glo", g.p_glo);
  g.p_loc = j.value("p_loc", g.p_loc);
  g.t_slerp = j.value("t_slerp", g.t_slerp);
  g.n_max = j.value("n_max", g.n_max);
  g.n_converge = j.value("n_converge", g.n_converge);
  g.dedup_retries = j.value("dedup_retries", g.dedup_retries);
  g.seed = j.value("seed", g.seed);
  return g;
}

json fit_json(const FitConfig& f) {
  return {{"degree", f.degree},
          {"n_init", f.n_init},
          {"n_total", f.n_total},
          {"n_add", f.n_add},
          {"segments_per_insertion", f.segments_per_insertion},
          {"l_min_rel", f.l_min_rel},
          {"beta_rel", f.beta_rel},
          {"epsilon0_rel", f.epsilon0_rel},
          {"epsilon_decay", f.epsilon_decay},
          {"w", f.w},
          {"eta0", f.eta0},
          {"eta1", f.eta1},
          {"n_samples", f.n_samples},
          {"max_iter", f.max_iter},
          {"epsilon_mode", f.epsilon_mode == EpsilonMode::Standoff ? "standoff" : "literal"},
          {"smooth_parameter", f.smooth_parameter == SmoothParameter::KnotSpan ? "knot_span" : "unit"}};
}

FitConfig fit_from(const json& j) {
  FitConfig f;
  f.degree = j.value("degree", f.degree);
  f.n_init = j.value("n_init", f.n_init);
  f.n_total = j.value("n_total", f.n_total);
  f.n_add = j.value("n_add", f.n_add);
  f.segments_per_insertion = j.value("segments_per_insertion", f.segments_per_insertion);
  f.l_min_rel = j.value("l_min_rel", f.l_min_rel);
  f.beta_rel = j.value("beta_rel", f.beta_rel);
  f.epsilon0_rel = j.value("epsilon0_rel", f.epsilon0_rel);
  f.epsilon_decay = j.value("epsilon_decay", f.epsilon_decay);
  f.w = j.value("w", f.w);
  f.eta0 = j.value("eta0", f.eta0);
  f.eta1 = j.value("eta1", f.eta1);
  f.n_samples = j.value("n_samples", f.n_samples);
  f.max_iter = j.value("max_iter", f.max_iter);
  if (j.value("epsilon_mode", std::string("standoff")) == "literal") f.epsilon_mode = EpsilonMode::Literal;
  if (j.value("smooth_parameter", std::string("knot_span")) == "unit") f.smooth_parameter = SmoothParameter::Unit;
  return f;
}

}  // namespace

json curve_to_json(const ClosedBSpline2& curve) {
  json pts = json::array();
  for (const auto& p : curve.control_points()) pts.push_back(vec(p));
  return {{"degree", curve.degree()}, {"knots", curve.knots()}, {"control_points", pts}};
}

ClosedBSpline2 curve_from_json(const json& j) {
  std::vector<Vec2> pts;
  for (const auto& p : j.at("control_points")) pts.push_back(vec2(p));
  return ClosedBSpline2(j.at("degree").get<int>(), std::move(pts), j.at("knots").get<std::vector<double>>());
}

json plan_to_json(const CutPlan& p) {
  const PlanConfig& c = p.config;
  json transform = json::array();
  for (int r = 0; r < 4; ++r) transform.push_back(json::array({p.transform(r, 0), p.transform(r, 1), p.transform(r, 2), p.transform(r, 3)}));
  json cuts = json::array();
  for (const auto& cut : p.cuts) {
    json contour = json::array();
    for (const auto& q : cut.contour) contour.push_back(vec(q));
    cuts.push_back({{"kind", cut.kind},
                    {"phi", cut.viewpoint.phi},
                    {"theta", cut.viewpoint.theta},
                    {"r", cut.viewpoint.r},
                    {"frame", frame_json(cut.frame)},
                    {"curve", curve_to_json(cut.curve)},
                    {"metrics",
                     {{"fitness_px2", cut.fitness},
                      {"d_avg", cut.d_avg},
                      {"volume", cut.volume},
                      {"volume_stderr", cut.volume_stderr},
                      {"ga_evaluations", cut.ga_evaluations},
                      {"fit_iterations", cut.fit_iterations}}},
                    {"contour", contour}});
  }
  return {{"version", p.version},
          {"mesh", {{"path", p.mesh_path}, {"volume", p.mesh_volume}}},
          {"transform", transform},
          {"config",
           {{"alpha", c.alpha},
            {"relative_alpha", c.relative_alpha},
            {"max_cuts", c.max_cuts},
            {"seed", c.seed},
            {"hemisphere", c.hemisphere},
            {"fill", c.fill},
            {"resolution", c.resolution},
            {"depth_samples", c.depth_samples},
            {"n_candidates", c.n_candidates},
            {"view_radius", c.view_radius},
            {"volume_samples", c.volume_samples},
            {"volume_seed", c.volume_seed},
            {"max_failures", c.max_failures},
            {"ga", ga_json(c.ga)},
            {"fit", fit_json(c.fit)}}},
          {"fabrication",
           {{"workbench", p.fabrication.workbench},
            {"bench",
             {{"radius", p.fabrication.bench.radius},
              {"z_bottom", p.fabrication.bench.z_bottom},
              {"z_top", p.fabrication.bench.z_top}}},
            {"bottom_plane", p.fabrication.bottom_plane}}},
          {"initial_volume", p.initial_volume},
          {"termination", p.termination},
          {"cuts", cuts}};
}

CutPlan plan_from_json(const json& j) {
  try {
    CutPlan p;
    p.version = j.at("version").get<int>();
    if (p.version != 1) throw InputError("unsupported plan version " + std::to_string(p.version));
    const json& m = j.at("mesh");
    p.mesh_path = m.value("path", std::string());
    p.mesh_volume = m.value("volume", 0.0);
    const json& t = j.at("transform");
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) p.transform(r, c) = t.at(r).at(c).get<double>();
    if (j.contains("config")) {
      const json& c = j["config"];
      PlanConfig& pc = p.config;
      pc.alpha = c.value("alpha", pc.alpha);
      pc.relative_alpha = c.value("relative_alpha", pc.relative_alpha);
      pc.max_cuts = c.value("max_cuts", pc.max_cuts);
      pc.seed = c.value("seed", pc.seed);
      pc.hemisphere = c.value("hemisphere", pc.hemisphere);
      pc.fill = c.value("fill", pc.fill);
      pc.resolution = c.value("resolution", pc.resolution);
      pc.depth_samples = c.value("depth_samples", pc.depth_samples);
      pc.n_candidates = c.value("n_candidates", pc.n_candidates);
      pc.view_radius = c.value("view_radius", pc.view_radius);
      pc.volume_samples = c.value("volume_samples", pc.volume_samples);
      pc.volume_seed = c.value("volume_seed", pc.volume_seed);
      pc.max_failures = c.value("max_failures", pc.max_failures);
      if (c.contains("ga")) pc.ga = ga_from(c["ga"]);
      if (c.contains("fit")) pc.fit = fit_from(c["fit"]);
    }
    if (j.contains("fabrication")) {
      const json& f = j["fabrication"];
      p.fabrication.workbench = f.value("workbench", false);
      p.fabrication.bottom_plane = f.value("bottom_plane", false);
      if (f.contains("bench")) {
        p.fabrication.bench.radius = f["bench"].value("radius", 0.3);
        p.fabrication.bench.z_bottom = f["bench"].value("z_bottom", -1.0);
        p.fabrication.bench.z_top = f["bench"].value("z_top", -0.5);
      }
    }
    p.initial_volume = j.value("initial_volume", 1.0);
    p.termination = j.value("termination", std::string());
    for (const auto& c : j.at("cuts")) {
      CutRecord r;
      r.kind = c.value("kind", std::string("contour"));
      r.viewpoint = Viewpoint{c.at("phi").get<double>(), c.at("theta").get<double>(), c.value("r", 2.0)};
      r.frame = c.contains("frame") ? frame_from(c["frame"]) : camera_frame(r.viewpoint);
      r.curve = curve_from_json(c.at("curve"));
      if (c.contains("metrics")) {
        const json& m2 = c["metrics"];
        r.fitness = m2.value("fitness_px2", 0.0);
        r.d_avg = m2.value("d_avg", 0.0);
        r.volume = m2.value("volume", 0.0);
        r.volume_stderr = m2.value("volume_stderr", 0.0);
        r.ga_evaluations = m2.value("ga_evaluations", std::size_t{0});
        r.fit_iterations = m2.value("fit_iterations", 0);
      }
      if (c.contains("contour"))
        for (const auto& q : c["contour"]) r.contour.push_back(vec2(q));
      p.cuts.push_back(std::move(r));
    }
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("plan: ") + e.what());
  }
}

void write_plan(const CutPlan& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << plan_to_json(p).dump(2) << '\n';
  if (!f) throw InputError("write failed: " + path);
}

CutPlan read_plan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return plan_from_json(j);
}

}  // namespace hotwire

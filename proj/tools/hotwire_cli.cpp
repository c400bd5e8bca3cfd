#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "hotwire/pipeline/io.hpp"
#include "hotwire/pipeline/plan.hpp"
#include "hotwire/projection/raster.hpp"
#include "hotwire/viewpoint/candidates.hpp"

namespace fs = std::filesystem;
using namespace hotwire;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitAborted = 3;
constexpr int kExitFailure = 1;

struct Options {
  std::string mesh, out, plan, contour, surfaces, trace;
  double alpha = 0.025;
  bool relative_alpha = false;
  int max_cuts = 15;
  std::uint64_t seed = 1;
  bool fabrication = false, hemisphere = false, fill = false, exhaustive = false;
  int grid = 128;
  int candidates = 5000;
  int pop = 30;
  int resolution = 256;
};

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
}

int run_plan(const Options& o) {
  const TriMesh input = load_obj(o.mesh);
  const Normalized norm = normalize_input(input, o.fill, o.fabrication);
  PlanConfig cfg;
  cfg.alpha = o.alpha;
  cfg.relative_alpha = o.relative_alpha;
  cfg.max_cuts = o.max_cuts;
  cfg.seed = o.seed;
  cfg.hemisphere = o.hemisphere;
  cfg.fill = o.fill;
  cfg.n_candidates = o.candidates;
  cfg.resolution = o.resolution;
  cfg.ga.n_pop = o.pop;
  cfg.fit.trace_distance = !o.trace.empty();
  FabricationOptions fab;
  fab.workbench = o.fabrication;
  fab.bottom_plane = o.fabrication;

  PlanHooks hooks;
  hooks.log = [](const std::string& s) { std::cerr << s << '\n'; };
  if (!o.trace.empty()) {
    ensure_dir(o.trace);
    hooks.on_cut = [&](int i, const BinaryImage& image, const CutRecord& rec, const FitResult& fr) {
      std::ostringstream stem;
      stem << o.trace << "/cut_" << std::setw(2) << std::setfill('0') << i + 1;
      write_pgm(image, stem.str() + "_silhouette.pgm");
      write_contour_csv(rec.contour, stem.str() + "_contour.csv");
      write_fit_trace_csv(fr.trace, stem.str() + "_fit.csv");
    };
  }
  CutPlan p = plan(norm.mesh, cfg, fab, hooks);
  p.mesh_path = o.mesh;
  p.transform = norm.transform;
  write_plan(p, o.out);
  std::cout << "cuts: " << p.cuts.size() << "\ntermination: " << p.termination << "\nvolume: "
            << (p.cuts.empty() ? p.initial_volume : p.cuts.back().volume) << "\nmesh volume: " << p.mesh_volume << '\n';
  return p.termination == "aborted" ? kExitAborted : 0;
}

int run_simulate(const Options& o) {
  const CutPlan p = read_plan(o.plan);
  const std::string mesh_path = o.mesh.empty() ? p.mesh_path : o.mesh;
  if (mesh_path.empty()) throw InputError("plan names no mesh; pass --mesh");
  const TriMesh mesh = apply(p.transform, load_obj(mesh_path));
  const double v = mesh_volume(mesh);
  if (std::abs(v - p.mesh_volume) > 1e-6 * std::max(1.0, std::abs(p.mesh_volume)))
    throw InputError("mesh does not match the plan (volume " + std::to_string(v) + " vs " +
                     std::to_string(p.mesh_volume) + ")");
  const SimulationReport rep = simulate(p, mesh, o.grid);
  write_obj(rep.remnant, o.out);
  write_obj(apply(Transform(p.transform.inverse()), rep.remnant), sibling(o.out, "_original"));
  std::cout << std::setprecision(6) << "cut,volume,volume_stderr,d_result_avg\n";
  for (std::size_t i = 0; i < rep.volumes.size(); ++i) {
    std::cout << i << ',' << rep.volumes[i] << ',' << rep.volume_stderr[i] << ',';
    if (i < rep.d_result_avg.size()) std::cout << rep.d_result_avg[i];
    std::cout << '\n';
  }
  return 0;
}

int run_viewselect(const Options& o) {
  const Normalized norm = normalize_input(load_obj(o.mesh), o.fill);
  const CandidateSet set = fibonacci_sample(o.candidates);
  const MaterialState material;
  const FitnessOptions fopt{o.resolution, 256, kFrameScale};
  int best = 0;
  double fitness = 0.0;
  std::size_t evaluations = 0;
  if (o.exhaustive) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double f = evaluate_fitness(set.viewpoints[i], material, norm.mesh, fopt);
      if (f > fitness) {
        fitness = f;
        best = static_cast<int>(i);
      }
    }
    evaluations = set.size();
  } else {
    GAConfig g;
    g.n_pop = std::min<int>(o.pop, static_cast<int>(set.size()));
    g.seed = o.seed;
    const GAResult r = run_ga(set, material, norm.mesh, g, fopt);
    best = r.best;
    fitness = r.fitness;
    evaluations = r.evaluations;
  }
  const Viewpoint& v = set.viewpoints[best];
  std::cout << std::setprecision(10) << "phi: " << v.phi << "\ntheta: " << v.theta << "\nr: " << v.r
            << "\nfitness: " << fitness << "\nevaluations: " << evaluations << '\n';
  return 0;
}

int run_fit2d(const Options& o) {
  const Polygon2 g(load_contour_csv(o.contour));
  FitConfig cfg;
  cfg.trace_distance = !o.trace.empty();
  const FitResult r = fit(g, cfg);
  if (!o.trace.empty()) write_fit_trace_csv(r.trace, o.trace);
  nlohmann::ordered_json j = {{"curve", curve_to_json(r.curve)},
                              {"d_avg", r.d_avg},
                              {"d_bb", g.bbox_diagonal()},
                              {"iterations", r.iterations}};
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write " + o.out);
  f << j.dump(2) << '\n';
  std::cout << std::setprecision(6) << "d_avg: " << r.d_avg << " (" << r.d_avg / g.bbox_diagonal()
            << " d_bb)\ncontrol points: " << r.curve.size() << "\niterations: " << r.iterations << '\n';
  return 0;
}

int run_export(const Options& o) {
  const CutPlan p = read_plan(o.plan);
  ensure_dir(o.surfaces);
  const Transform inv = p.transform.inverse();
  // Circumscribed half-extent of the stock box.
  const double clamp = std::sqrt(3.0) * kBoxHalf;
  for (std::size_t i = 0; i < p.cuts.size(); ++i) {
    const TriMesh m = extrude_ruled_surface(p.cuts[i].curve, p.cuts[i].frame).mesh(256, clamp);
    std::ostringstream stem;
    stem << o.surfaces << "/cut_" << std::setw(2) << std::setfill('0') << i + 1;
    write_obj(m, stem.str() + ".obj");
    write_obj(apply(inv, m), stem.str() + "_original.obj");
  }
  std::cout << "surfaces: " << p.cuts.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hot-wire rough cutting planner"};
  app.require_subcommand(1);
  Options o;

  auto* plan_cmd = app.add_subcommand("plan", "plan a cut sequence for a mesh");
  plan_cmd->add_option("--mesh", o.mesh, "input OBJ")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--out", o.out, "output plan JSON")->required();
  plan_cmd->add_option("--alpha", o.alpha, "volume tolerance");
  plan_cmd->add_flag("--relative-alpha", o.relative_alpha, "alpha as a fraction of the mesh volume");
  plan_cmd->add_option("--max-cuts", o.max_cuts, "cut budget");
  plan_cmd->add_option("--seed", o.seed, "random seed");
  plan_cmd->add_flag("--fabrication", o.fabrication, "workbench support and bottom plane cut");
  plan_cmd->add_flag("--hemisphere", o.hemisphere, "only views from above");
  plan_cmd->add_flag("--fill", o.fill, "scale small meshes up to the box");
  plan_cmd->add_option("--candidates", o.candidates, "number of candidate viewpoints");
  plan_cmd->add_option("--pop", o.pop, "GA population size");
  plan_cmd->add_option("--resolution", o.resolution, "image resolution");
  plan_cmd->add_option("--trace", o.trace, "directory for per-cut images, contours and fit traces");

  auto* sim_cmd = app.add_subcommand("simulate", "replay a plan and export the remnant");
  sim_cmd->add_option("--plan", o.plan, "plan JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", o.out, "remnant OBJ (normalized units)")->required();
  sim_cmd->add_option("--grid", o.grid, "surface extraction grid");
  sim_cmd->add_option("--mesh", o.mesh, "mesh to compare against (defaults to the plan's)");

  auto* view_cmd = app.add_subcommand("viewselect", "best first viewpoint for a mesh");
  view_cmd->add_option("--mesh", o.mesh, "input OBJ")->required()->check(CLI::ExistingFile);
  view_cmd->add_flag("--exhaustive", o.exhaustive, "evaluate every candidate");
  view_cmd->add_option("--candidates", o.candidates, "number of candidate viewpoints");
  view_cmd->add_option("--pop", o.pop, "GA population size");
  view_cmd->add_option("--seed", o.seed, "random seed");
  view_cmd->add_option("--resolution", o.resolution, "image resolution");

  auto* fit_cmd = app.add_subcommand("fit2d", "fit a closed B-spline around a contour");
  fit_cmd->add_option("--contour", o.contour, "contour CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", o.out, "output JSON")->required();
  fit_cmd->add_option("--trace", o.trace, "per-iteration CSV");

  auto* exp_cmd = app.add_subcommand("export", "write ruled surfaces of a plan as OBJ");
  exp_cmd->add_option("--plan", o.plan, "plan JSON")->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--surfaces", o.surfaces, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*plan_cmd) return run_plan(o);
    if (*sim_cmd) return run_simulate(o);
    if (*view_cmd) return run_viewselect(o);
    if (*fit_cmd) return run_fit2d(o);
    if (*exp_cmd) return run_export(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

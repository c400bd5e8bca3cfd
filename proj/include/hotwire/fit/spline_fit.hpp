#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hotwire/geom/bspline.hpp"
#include "hotwire/geom/ccd.hpp"
#include "hotwire/geom/polygon.hpp"

namespace hotwire {

enum class EpsilonMode {
  Standoff,  // targets sit epsilon off the contour; closer samples do not pull
  Literal,   // epsilon only shifts the reported error
};

enum class SmoothParameter {
  KnotSpan,  // sum over spans of the integral in the local span parameter
  Unit,      // derivatives with respect to u in [0, 1]
};

struct FitConfig {
  int degree = 3;
  int n_init = 40;
  int n_total = 120;
  int n_add = 3;
  int segments_per_insertion = 3;
  double l_min_rel = 0.0025;     // of d_bb
  double beta_rel = 0.02;        // of d_bb
  double epsilon0_rel = 0.01;    // of d_bb
  double epsilon_decay = 0.8;
  double w = 1.0;
  double eta0 = 0.0;
  double eta1 = 1.0;
  int n_samples = 1000;
  int max_iter = 30;
  double error_threshold_coeff = 1e-6;
  int ccd_refinement = 8;
  double correspondence_switch_rel = 5e-2;
  double correspondence_switch_coeff = 1.0 / 20.0;
  std::size_t min_hull_vertices = 10;
  double init_radius_factor = 1.5;
  double init_growth = 1.2;
  double armijo_c = 1e-4;
  double armijo_backtrack = 0.5;
  double ccd_cap_rel = 10.0;  // of d_bb
  double ccd_safety = 0.99;
  EpsilonMode epsilon_mode = EpsilonMode::Standoff;
  SmoothParameter smooth_parameter = SmoothParameter::KnotSpan;
  bool trace_distance = false;  // d_avg per iteration in the trace
  // Length of one source-image pixel in contour units. The switch and
  // termination thresholds are pixel-unit quantities. 0: d_bb / 256.
  double contour_unit = 0.0;

  void validate() const;
};

enum class CorrespondenceMode { ArcLength, ClosestPoint };

struct Correspondence {
  double u = 0.0;
  Vec2 foot = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();
  Vec2 normal = Vec2::UnitY();
  double rho = 0.0;
  double d = 0.0;      // signed distance to the sample
  int delta = 1;       // visibility
  double e_sd = 0.0;   // against the sample itself
  Vec2 target = Vec2::Zero();
  double alpha = 0.0;  // tangential weight used in the model
  bool active = true;
};

/// Target contour and its samples, in contour-centred coordinates.
struct FitProblem {
  Polygon2 g;
  double d_bb = 0.0;
  std::vector<Vec2> samples;
  std::vector<double> sample_arc;   // arc-length ratio from the start vertex
  std::vector<int> sample_edge;     // edge index holding the sample
  std::vector<char> sample_at_vertex;
  int start_vertex = 0;
  std::vector<Vec2> hull;           // simplified hull, starting at start_vertex
  CollisionObstacle obstacle;
  SegmentGrid edges;

  FitProblem(Polygon2 contour, const FitConfig& cfg);
};

struct FitState {
  ClosedBSpline2 curve;
  std::vector<Correspondence> corr;
  double epsilon = 0.0;
  CorrespondenceMode mode = CorrespondenceMode::ArcLength;
  int iteration = 0;
};

struct EnergyTerms {
  double e = 0.0;
  double e_error = 0.0;
  double e_smooth = 0.0;
};

/// Quadratic model of the energy with frozen correspondences and frames:
/// E(P) = x^T A x - 2 b^T x + c, x = stacked control points (x0, y0, x1, ...).
struct QuadraticModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;

  double value(const Eigen::VectorXd& x) const { return x.dot(A * x) - 2.0 * b.dot(x) + c; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return 2.0 * (A * x - b); }
};

Eigen::VectorXd stack(const std::vector<Vec2>& points);
std::vector<Vec2> unstack(const Eigen::VectorXd& x);

/// Circle initialization guided by the simplified hull; grows the radius
/// until the curve is collision-free and encloses the contour.
FitState init_curve(const FitProblem& problem, const FitConfig& cfg);

/// Recomputes parameters (closest-point mode only), feet, frames, signed
/// distances, visibility and model targets.
void update_correspondences(FitState& state, const FitProblem& problem, const FitConfig& cfg);

/// Visibility: 0 when the segment from the foot to the sample crosses g.
void compute_visibility(FitState& state, const FitProblem& problem);

/// Sum of the squared-distance terms for given correspondences (reporting form).
EnergyTerms evaluate_energy(const FitState& state, const FitProblem& problem, const FitConfig& cfg);

double smoothness_energy(const ClosedBSpline2& curve, const FitConfig& cfg);

QuadraticModel build_model(const FitState& state, const FitConfig& cfg);

/// Newton direction of the quadratic model, as per-control-point displacements.
std::vector<Vec2> newton_step(const FitState& state, const FitConfig& cfg);
std::vector<Vec2> newton_step(const QuadraticModel& model, const Eigen::VectorXd& x);

struct StepStats {
  int moved = 0;
  int blocked = 0;  // points limited by collision
  double energy_before = 0.0;
  double energy_after = 0.0;
};

/// Moves the control points one at a time in descending order of local
/// error, each with a collision-capped Armijo search.
StepStats apply_step(FitState& state, const std::vector<Vec2>& displacements, const FitProblem& problem,
                     const FitConfig& cfg);

/// Largest collision-free step for moving control point `a` by t * dir.
double control_point_max_step(const ClosedBSpline2& curve, int a, const Vec2& dir, const FitProblem& problem,
                              const FitConfig& cfg);

/// Mean error per knot span and per control point.
std::vector<double> span_error(const FitState& state);
std::vector<double> control_point_error(const FitState& state);

/// Inserts knots into the highest-error spans; returns the number added.
int add_control_points(FitState& state, const FitProblem& problem, const FitConfig& cfg);

/// Curve polygon (kCurvePolygonSamples) does not touch g and encloses every g vertex.
bool curve_is_safe(const ClosedBSpline2& curve, const Polygon2& g);

/// Bidirectional average distance.
double average_distance(const ClosedBSpline2& curve, const Polygon2& g, int n_samples = 1000);

/// Closest curve parameter to p.
double closest_parameter(const ClosedBSpline2& curve, const Vec2& p, const std::vector<Vec2>& dense);

struct FitTraceRow {
  int iteration = 0;
  double e = 0.0;
  double e_error = 0.0;
  double e_smooth = 0.0;
  int control_points = 0;
  double d_avg = 0.0;
  double hidden_fraction = 0.0;
  bool closest_mode = false;
};

struct FitResult {
  ClosedBSpline2 curve;
  double d_avg = 0.0;
  int iterations = 0;
  std::vector<FitTraceRow> trace;
};

/// Fits a closed curve around g. Output is in g's coordinates.
FitResult fit(const Polygon2& g, const FitConfig& cfg = {}, const std::function<void(const FitState&)>& on_iteration = {});

}  // namespace hotwire

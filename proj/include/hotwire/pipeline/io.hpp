#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hotwire/fit/spline_fit.hpp"
#include "hotwire/geom/mesh.hpp"
#include "hotwire/geom/polygon.hpp"

namespace hotwire {

/// Wavefront OBJ: `v x y z` and `f a b c ...` records (1-based or negative
/// indices, `a/b/c` forms accepted); polygons are fan-triangulated.
TriMesh parse_obj(std::istream& in);
TriMesh load_obj(const std::string& path);
void write_obj(const TriMesh& mesh, std::ostream& out);
void write_obj(const TriMesh& mesh, const std::string& path);

/// One `x,y` pair per line; blank lines and lines starting with '#' skipped.
std::vector<Vec2> parse_contour_csv(std::istream& in);
std::vector<Vec2> load_contour_csv(const std::string& path);
void write_contour_csv(const std::vector<Vec2>& points, const std::string& path);

void write_fit_trace_csv(const std::vector<FitTraceRow>& rows, const std::string& path);

}  // namespace hotwire

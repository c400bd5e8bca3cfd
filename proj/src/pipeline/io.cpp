#include "hotwire/pipeline/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hotwire {

namespace {

double parse_number(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ParseError("bad number '" + tok + "'", line);
  return v;
}

long parse_index(const std::string& tok, std::size_t line) {
  const std::string head = tok.substr(0, tok.find('/'));
  long v = 0;
  const char* end = head.data() + head.size();
  auto [ptr, ec] = std::from_chars(head.data(), end, v);
  if (head.empty() || ec != std::errc() || ptr != end) throw ParseError("bad face index '" + tok + "'", line);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

}  // namespace

TriMesh parse_obj(std::istream& in) {
  TriMesh mesh;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream ss(text);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::string x, y, z;
      if (!(ss >> x >> y >> z)) throw ParseError("vertex needs three coordinates", line);
      mesh.vertices.emplace_back(parse_number(x, line), parse_number(y, line), parse_number(z, line));
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        long i = parse_index(tok, line);
        const long n = static_cast<long>(mesh.vertices.size());
        if (i == 0) throw ParseError("face index 0 (indices are 1-based)", line);
        if (i < 0) i = n + i + 1;
        if (i < 1 || i > n) throw ParseError("face index out of range", line);
        idx.push_back(static_cast<int>(i - 1));
      }
      if (idx.size() < 3) throw ParseError("face needs at least three vertices", line);
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  if (mesh.triangles.empty()) throw InputError("OBJ has no faces");
  return mesh;
}

TriMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_obj(in);
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_obj(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  write_obj(mesh, out);
  if (!out) throw InputError("failed writing " + path);
}

std::vector<Vec2> parse_contour_csv(std::istream& in) {
  std::vector<Vec2> pts;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ParseError("expected x,y", line);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    pts.emplace_back(parse_number(trim(text.substr(0, comma)), line), parse_number(trim(text.substr(comma + 1)), line));
  }
  if (pts.size() < 3) throw InputError("contour needs at least three points");
  return pts;
}

std::vector<Vec2> load_contour_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_contour_csv(in);
}

void write_contour_csv(const std::vector<Vec2>& points, const std::string& path) {
  auto out = open_out(path);
  for (const auto& p : points) out << p.x() << ',' << p.y() << '\n';
}

void write_fit_trace_csv(const std::vector<FitTraceRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "iteration,E,E_error,E_smooth,control_points,d_avg\n";
  for (const auto& r : rows)
    out << r.iteration << ',' << r.e << ',' << r.e_error << ',' << r.e_smooth << ',' << r.control_points << ','
        << r.d_avg << '\n';
}

}  // namespace hotwire

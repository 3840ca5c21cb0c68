#include "binpose/geometry/mesh_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "binpose/errors.h"

namespace binpose::geometry {

namespace {

std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& token, const std::filesystem::path& path) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DataError(path.string(), "bad number '" + token + "'");
  }
  return v;
}

int ParseFaceIndex(const std::string& token, int vertex_count,
                   const std::filesystem::path& path) {
  // Accept "7", "7/1", "7//3" and take the vertex index.
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  auto res = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (res.ec != std::errc() || res.ptr != head.data() + head.size()) {
    throw DataError(path.string(), "bad face index '" + token + "'");
  }
  if (idx < 0) idx = vertex_count + idx + 1;
  if (idx < 1 || idx > vertex_count) {
    throw DataError(path.string(), "face index out of range '" + token + "'");
  }
  return idx - 1;
}

}  // namespace

TriangleMesh ReadObj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), "cannot open");
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::string x, y, z;
      if (!(ls >> x >> y >> z)) throw DataError(path.string(), "short vertex line");
      mesh.vertices.emplace_back(ParseDouble(x, path), ParseDouble(y, path),
                                 ParseDouble(z, path));
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (tokens.size() != 3) {
        throw DataError(path.string(), "only triangular faces are supported");
      }
      const int n = static_cast<int>(mesh.vertices.size());
      mesh.triangles.push_back({ParseFaceIndex(tokens[0], n, path),
                                ParseFaceIndex(tokens[1], n, path),
                                ParseFaceIndex(tokens[2], n, path)});
    }
    // Other statements (vn, vt, o, g, s, usemtl, ...) are ignored.
  }
  if (mesh.triangles.empty()) throw DataError(path.string(), "no faces");
  return mesh;
}

void WriteObj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  for (const Vec3& v : mesh.vertices) {
    out << "v " << FormatDouble(v.x()) << ' ' << FormatDouble(v.y()) << ' '
        << FormatDouble(v.z()) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  if (!out) throw DataError(path.string(), "write failed");
}

PointCloud ReadPly(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), "cannot open");
  std::string line;
  if (!std::getline(in, line) || line != "ply") {
    throw DataError(path.string(), "missing 'ply' magic");
  }
  std::size_t vertex_count = 0;
  bool in_vertex = false, ascii = false;
  std::vector<std::string> props;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string kind;
      ls >> kind;
      ascii = kind == "ascii";
    } else if (tag == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      in_vertex = name == "vertex";
      if (in_vertex) {
        vertex_count = count;
      } else if (count != 0) {
        throw DataError(path.string(), "unsupported element '" + name + "'");
      }
    } else if (tag == "property" && in_vertex) {
      std::string type, name;
      ls >> type >> name;
      if (type != "float" && type != "double" && type != "float32" &&
          type != "float64") {
        throw DataError(path.string(), "unsupported property type '" + type + "'");
      }
      props.push_back(name);
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!ascii) throw DataError(path.string(), "only ASCII PLY is supported");
  int ix = -1, iy = -1, iz = -1;
  for (int i = 0; i < static_cast<int>(props.size()); ++i) {
    if (props[i] == "x") ix = i;
    if (props[i] == "y") iy = i;
    if (props[i] == "z") iz = i;
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw DataError(path.string(), "vertex element lacks x/y/z");
  }
  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw DataError(path.string(), "truncated body");
    std::istringstream ls(line);
    std::vector<std::string> tokens(props.size());
    for (auto& t : tokens) {
      if (!(ls >> t)) throw DataError(path.string(), "short vertex row");
    }
    cloud.points.emplace_back(ParseDouble(tokens[ix], path),
                              ParseDouble(tokens[iy], path),
                              ParseDouble(tokens[iz], path));
  }
  return cloud;
}

void WritePly(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string(), "cannot open for writing");
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const Vec3& p : cloud.points) {
    out << FormatDouble(p.x()) << ' ' << FormatDouble(p.y()) << ' '
        << FormatDouble(p.z()) << '\n';
  }
  if (!out) throw DataError(path.string(), "write failed");
}

}  // namespace binpose::geometry

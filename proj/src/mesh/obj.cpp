#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"

namespace shellvib {

namespace {

int parse_index(const std::string& token, int num_vertices, int line_no) {
  // Accept "i", "i/t", "i/t/n" and "i//n"; only the position index matters.
  const std::string head = token.substr(0, token.find('/'));
  int index = 0;
  try {
    std::size_t used = 0;
    index = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw Error(ErrorCode::IoError, "line " + std::to_string(line_no) + ": bad face index '" + token + "'");
  }
  if (index < 0) index = num_vertices + index + 1;
  if (index < 1 || index > num_vertices) {
    throw Error(ErrorCode::IndexOutOfRange,
                "line " + std::to_string(line_no) + ": vertex index " + head + " out of range");
  }
  return index - 1;
}

}  // namespace

ControlMesh parse_obj(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<Quad> faces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) {
        throw Error(ErrorCode::IoError, "line " + std::to_string(line_no) + ": malformed vertex");
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string t; ls >> t;) tokens.push_back(t);
      if (tokens.size() != 4) {
        throw Error(ErrorCode::QuadOnly, "line " + std::to_string(line_no) + ": face with " +
                                             std::to_string(tokens.size()) + " vertices");
      }
      Quad q;
      for (int k = 0; k < 4; ++k) {
        q[k] = parse_index(tokens[k], static_cast<int>(vertices.size()), line_no);
      }
      faces.push_back(q);
    }
    // Other records (vn, vt, g, o, s, usemtl, ...) carry nothing we use.
  }
  return ControlMesh(std::move(vertices), std::move(faces));
}

ControlMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_obj(in);
}

void write_obj(const ControlMesh& mesh, std::ostream& out) {
  char buf[128];
  for (const Vec3& p : mesh.real_positions()) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (int f = 0; f < mesh.num_real_faces(); ++f) {
    const Quad& q = mesh.topology().face(f);
    out << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
  }
}

void write_obj(const ControlMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "# quad control mesh: " << mesh.num_real_vertices() << " vertices, "
      << mesh.num_real_faces() << " faces\n";
  write_obj(mesh, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace shellvib

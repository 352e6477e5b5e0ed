#include <string>
#include <unordered_map>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"

namespace shellvib {

namespace {

std::uint64_t edge_key(int from, int to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

}  // namespace

Topology::Topology(int num_vertices, std::vector<Quad> faces)
    : num_vertices_(num_vertices), faces_(std::move(faces)) {
  if (num_vertices_ <= 0 || faces_.empty()) {
    throw Error(ErrorCode::BadGeometry, "mesh needs at least one vertex and one face");
  }
  const int nf = num_faces();
  for (int f = 0; f < nf; ++f) {
    const Quad& q = faces_[f];
    for (int k = 0; k < 4; ++k) {
      if (q[k] < 0 || q[k] >= num_vertices_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(q[k]));
      }
      for (int l = k + 1; l < 4; ++l) {
        if (q[k] == q[l]) {
          throw Error(ErrorCode::QuadOnly,
                      "face " + std::to_string(f) + " repeats vertex " + std::to_string(q[k]));
        }
      }
    }
  }

  const int nh = num_halfedges();
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(static_cast<std::size_t>(nh) * 2);
  for (int h = 0; h < nh; ++h) {
    auto [it, inserted] = directed.emplace(edge_key(origin(h), dest(h)), h);
    if (!inserted) {
      throw Error(ErrorCode::NonManifold, "directed edge " + std::to_string(origin(h)) + "->" +
                                              std::to_string(dest(h)) +
                                              " used twice (non-manifold or inconsistent orientation)");
    }
  }

  twin_.assign(nh, -1);
  edge_of_.assign(nh, -1);
  for (int h = 0; h < nh; ++h) {
    auto it = directed.find(edge_key(dest(h), origin(h)));
    if (it != directed.end()) twin_[h] = it->second;
  }
  for (int h = 0; h < nh; ++h) {
    if (edge_of_[h] >= 0) continue;
    const int e = static_cast<int>(edges_.size());
    edges_.push_back({origin(h), dest(h)});
    edge_halfedge_.push_back(h);
    edge_of_[h] = e;
    if (twin_[h] >= 0) {
      edge_of_[twin_[h]] = e;
    } else {
      ++num_boundary_edges_;
    }
  }

  std::vector<std::vector<int>> outgoing(num_vertices_);
  for (int h = 0; h < nh; ++h) outgoing[origin(h)].push_back(h);

  valence_.assign(num_vertices_, 0);
  boundary_.assign(num_vertices_, false);
  fans_.resize(num_vertices_);
  for (int v = 0; v < num_vertices_; ++v) {
    const auto& out = outgoing[v];
    if (out.empty()) {
      throw Error(ErrorCode::NonManifold, "vertex " + std::to_string(v) + " is not used by any face");
    }
    int start = out.front();
    int boundary_starts = 0;
    for (int h : out) {
      if (twin_[h] < 0) {
        start = h;
        ++boundary_starts;
      }
    }
    if (boundary_starts > 1) {
      throw Error(ErrorCode::NonManifold, "vertex " + std::to_string(v) + " joins several boundary fans");
    }
    std::vector<int>& fan = fans_[v];
    int h = start;
    do {
      fan.push_back(h);
      h = twin_[prev(h)];
    } while (h >= 0 && h != start && fan.size() <= out.size());
    if (fan.size() != out.size()) {
      throw Error(ErrorCode::NonManifold, "faces around vertex " + std::to_string(v) + " do not form a single fan");
    }
    boundary_[v] = boundary_starts == 1;
    valence_[v] = static_cast<int>(fan.size()) + (boundary_[v] ? 1 : 0);
  }
}

ControlMesh::ControlMesh(std::vector<Vec3> vertices, std::vector<Quad> faces)
    : topology_(std::make_shared<const Topology>(static_cast<int>(vertices.size()), std::move(faces))),
      vertices_(std::move(vertices)),
      num_real_faces_(topology_->num_faces()) {}

ControlMesh::ControlMesh(std::shared_ptr<const Topology> topology, std::vector<Vec3> vertices,
                         std::vector<GhostRef> ghosts, int num_real_faces)
    : topology_(std::move(topology)),
      vertices_(std::move(vertices)),
      ghosts_(std::move(ghosts)),
      num_real_faces_(num_real_faces < 0 ? topology_->num_faces() : num_real_faces) {
  if (static_cast<int>(vertices_.size()) != topology_->num_vertices()) {
    throw Error(ErrorCode::IndexOutOfRange, "vertex count does not match topology");
  }
  for (const GhostRef& g : ghosts_) {
    if (g.boundary < 0 || g.boundary >= num_real_vertices() || g.interior < 0 ||
        g.interior >= num_real_vertices()) {
      throw Error(ErrorCode::IndexOutOfRange, "ghost references a non-real vertex");
    }
  }
}

ControlMesh ControlMesh::with_real_positions(std::vector<Vec3> real) const {
  if (static_cast<int>(real.size()) != num_real_vertices()) {
    throw Error(ErrorCode::IndexOutOfRange, "expected one position per real vertex");
  }
  const int nr = num_real_vertices();
  real.resize(num_vertices());
  for (std::size_t g = 0; g < ghosts_.size(); ++g) {
    real[nr + g] = 2.0 * real[ghosts_[g].boundary] - real[ghosts_[g].interior];
  }
  return ControlMesh(topology_, std::move(real), ghosts_, num_real_faces_);
}

int ControlMesh::extraordinary_vertex_count() const {
  int count = 0;
  for (int v = 0; v < num_real_vertices(); ++v) {
    if (topology_->is_extraordinary(v)) ++count;
  }
  return count;
}

}  // namespace shellvib

#include <map>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"

namespace shellvib {

SubdivisionStep subdivision_step(const Topology& topo) {
  const int nv = topo.num_vertices();
  const int ne = topo.num_edges();
  const int nf = topo.num_faces();
  const auto edge_point = [nv](int e) { return nv + e; };
  const auto face_point = [nv, ne](int f) { return nv + ne + f; };

  SubdivisionStep step;
  step.num_vertices = nv + ne + nf;
  step.boundary_rule.assign(step.num_vertices, false);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nv) * 13 + static_cast<std::size_t>(ne) * 10 +
                   static_cast<std::size_t>(nf) * 4);

  const auto add_face_centroid = [&](int row, int f, double w) {
    for (int c : topo.face(f)) triplets.emplace_back(row, c, 0.25 * w);
  };

  for (int f = 0; f < nf; ++f) add_face_centroid(face_point(f), f, 1.0);

  for (int e = 0; e < ne; ++e) {
    const int row = edge_point(e);
    const auto [a, b] = topo.edge(e);
    const int h = topo.edge_halfedge(e);
    const int t = topo.twin(h);
    if (t < 0) {
      triplets.emplace_back(row, a, 0.5);
      triplets.emplace_back(row, b, 0.5);
      step.boundary_rule[row] = true;
    } else {
      triplets.emplace_back(row, a, 0.25);
      triplets.emplace_back(row, b, 0.25);
      add_face_centroid(row, Topology::face_of(h), 0.25);
      add_face_centroid(row, Topology::face_of(t), 0.25);
    }
  }

  for (int v = 0; v < nv; ++v) {
    const auto& fan = topo.fan(v);
    if (topo.is_boundary(v)) {
      // Cubic B-spline curve rule along the boundary polygon.
      const int ahead = topo.dest(fan.front());
      const int behind = topo.origin(Topology::prev(fan.back()));
      triplets.emplace_back(v, ahead, 0.125);
      triplets.emplace_back(v, behind, 0.125);
      triplets.emplace_back(v, v, 0.75);
      step.boundary_rule[v] = true;
      continue;
    }
    // (Q + 2R + (n-3)S) / n with Q the mean face point and R the mean edge midpoint.
    const double n = static_cast<double>(fan.size());
    for (int h : fan) {
      add_face_centroid(v, Topology::face_of(h), 1.0 / (n * n));
      triplets.emplace_back(v, topo.dest(h), 1.0 / (n * n));
    }
    triplets.emplace_back(v, v, 1.0 / n + (n - 3.0) / n);
  }

  step.stencil.resize(step.num_vertices, nv);
  step.stencil.setFromTriplets(triplets.begin(), triplets.end());

  step.faces.resize(static_cast<std::size_t>(4) * nf);
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 4; ++k) {
      const int h = 4 * f + k;
      step.faces[h] = {topo.face(f)[k], edge_point(topo.edge_of(h)), face_point(f),
                       edge_point(topo.edge_of(Topology::prev(h)))};
    }
  }
  return step;
}

ControlMesh subdivide_once(const ControlMesh& mesh) {
  if (mesh.has_ghosts()) {
    throw Error(ErrorCode::UnsupportedTopology, "subdivide the real mesh, not its ghost extension");
  }
  SubdivisionStep step = subdivision_step(mesh.topology());
  std::vector<Vec3> refined(step.num_vertices, Vec3::Zero());
  for (int r = 0; r < step.stencil.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(step.stencil, r); it; ++it) {
      refined[r] += it.value() * mesh.position(static_cast<int>(it.col()));
    }
  }
  return ControlMesh(std::move(refined), std::move(step.faces));
}

ControlMesh with_ghost_ring(const ControlMesh& mesh) {
  if (mesh.has_ghosts()) {
    throw Error(ErrorCode::UnsupportedTopology, "mesh already carries a ghost ring");
  }
  const Topology& topo = mesh.topology();
  if (topo.closed()) return mesh;

  std::vector<Vec3> vertices(mesh.positions().begin(), mesh.positions().end());
  std::vector<Quad> faces = topo.faces();
  std::vector<GhostRef> ghosts;
  std::map<std::pair<int, int>, int> ghost_index;
  const auto ghost = [&](int boundary, int interior) {
    auto [it, inserted] = ghost_index.emplace(std::make_pair(boundary, interior), 0);
    if (inserted) {
      it->second = static_cast<int>(vertices.size());
      vertices.push_back(2.0 * vertices[boundary] - vertices[interior]);
      ghosts.push_back({boundary, interior});
    }
    return it->second;
  };

  for (int h = 0; h < topo.num_halfedges(); ++h) {
    if (topo.twin(h) >= 0) continue;
    const int u = topo.origin(h);
    const int w = topo.dest(h);
    const int after_w = topo.origin(Topology::next(Topology::next(h)));
    const int before_u = topo.origin(Topology::prev(h));
    faces.push_back({w, u, ghost(u, before_u), ghost(w, after_w)});
  }
  for (int v = 0; v < topo.num_vertices(); ++v) {
    if (!topo.is_boundary(v) || topo.fan(v).size() != 1) continue;
    const int h = topo.fan(v).front();
    const int along = topo.dest(h);
    const int diagonal = topo.origin(Topology::next(Topology::next(h)));
    const int before = topo.origin(Topology::prev(h));
    faces.push_back({v, ghost(v, along), ghost(v, diagonal), ghost(v, before)});
  }

  auto extended = std::make_shared<const Topology>(static_cast<int>(vertices.size()), std::move(faces));
  return ControlMesh(std::move(extended), std::move(vertices), std::move(ghosts), topo.num_faces());
}

}  // namespace shellvib

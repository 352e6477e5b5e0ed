#include <string>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"

namespace shellvib {

namespace {

using T = Topology;

int checked_twin(const Topology& topo, int h, int face) {
  const int t = topo.twin(h);
  if (t < 0) {
    throw Error(ErrorCode::UnsupportedTopology,
                "face " + std::to_string(face) + " has no complete one-ring");
  }
  return t;
}

// Bottom half-edge of a neighbouring cell in a locally regular grid. The
// bottom half-edge of a cell runs from its (0,0) corner to its (1,0) corner.
int cell_above(const Topology& topo, int b, int face) {
  return checked_twin(topo, T::next(T::next(b)), face);
}
int cell_below(const Topology& topo, int b, int face) {
  return T::next(T::next(checked_twin(topo, b, face)));
}
int cell_right(const Topology& topo, int b, int face) {
  return T::next(checked_twin(topo, T::next(b), face));
}
int cell_left(const Topology& topo, int b, int face) {
  return T::prev(checked_twin(topo, T::prev(b), face));
}

bool regular_interior(const Topology& topo, int v) {
  return !topo.is_boundary(v) && topo.valence(v) == 4;
}

void check_isolation_input(const ControlMesh& mesh) {
  const Topology& topo = mesh.topology();
  for (int v = 0; v < topo.num_vertices(); ++v) {
    if (topo.is_boundary(v) && topo.fan(v).size() > 2) {
      throw Error(ErrorCode::UnsupportedTopology,
                  "boundary vertex " + std::to_string(v) + " has valence " +
                      std::to_string(topo.valence(v)));
    }
  }
}

bool isolated(const Topology& topo) {
  for (const Quad& q : topo.faces()) {
    int count = 0;
    for (int v : q) count += topo.is_extraordinary(v) ? 1 : 0;
    if (count > 1) return false;
  }
  for (int e = 0; e < topo.num_edges(); ++e) {
    const auto& [a, b] = topo.edge(e);
    if (topo.is_extraordinary(a) && topo.is_extraordinary(b)) return false;
  }
  return true;
}

}  // namespace

std::array<int, 16> gather_regular(const Topology& topo, int face, int rotation) {
  for (int k = 0; k < 4; ++k) {
    if (!regular_interior(topo, topo.face(face)[k])) {
      throw Error(ErrorCode::UnsupportedTopology,
                  "face " + std::to_string(face) + " is not a regular element");
    }
  }
  std::array<int, 9> cells{};
  const auto cell = [&cells](int ci, int cj) -> int& { return cells[ci + 3 * cj]; };
  cell(1, 1) = 4 * face + rotation;
  cell(1, 2) = cell_above(topo, cell(1, 1), face);
  cell(1, 0) = cell_below(topo, cell(1, 1), face);
  for (int cj = 0; cj < 3; ++cj) {
    cell(0, cj) = cell_left(topo, cell(1, cj), face);
    cell(2, cj) = cell_right(topo, cell(1, cj), face);
  }

  std::array<int, 16> ids{};
  ids.fill(-1);
  const auto put = [&](int i, int j, int v) {
    int& slot = ids[i + 4 * j];
    if (slot >= 0 && slot != v) {
      throw Error(ErrorCode::UnsupportedTopology,
                  "inconsistent one-ring around face " + std::to_string(face));
    }
    slot = v;
  };
  for (int cj = 0; cj < 3; ++cj) {
    for (int ci = 0; ci < 3; ++ci) {
      const int b = cell(ci, cj);
      put(ci, cj, topo.origin(b));
      put(ci + 1, cj, topo.origin(T::next(b)));
      put(ci + 1, cj + 1, topo.origin(T::next(T::next(b))));
      put(ci, cj + 1, topo.origin(T::prev(b)));
    }
  }
  return ids;
}

std::vector<int> gather_irregular(const Topology& topo, int face, int rotation) {
  const Quad& q = topo.face(face);
  const int ev = q[rotation];
  if (topo.is_boundary(ev)) {
    throw Error(ErrorCode::UnsupportedTopology, "extraordinary vertex " + std::to_string(ev) + " on boundary");
  }
  for (int k = 1; k < 4; ++k) {
    if (!regular_interior(topo, q[(rotation + k) % 4])) {
      throw Error(ErrorCode::UnsupportedTopology,
                  "face " + std::to_string(face) + " touches more than one extraordinary vertex");
    }
  }
  const int n = topo.valence(ev);
  std::vector<int> ids(2 * n + 8, -1);
  ids[0] = ev;
  int h = 4 * face + rotation;
  for (int k = 0; k < n; ++k) {
    ids[2 * k + 1] = topo.dest(h);
    ids[2 * k + 2] = topo.origin(T::next(T::next(h)));
    h = checked_twin(topo, T::prev(h), face);
  }
  if (h != 4 * face + rotation) {
    throw Error(ErrorCode::UnsupportedTopology, "fan around vertex " + std::to_string(ev) + " does not close");
  }

  const int b = 4 * face + rotation;
  const int top = cell_above(topo, b, face);
  const int top_left = cell_left(topo, top, face);
  const int top_right = cell_right(topo, top, face);
  const int right = cell_right(topo, b, face);
  const int bottom_right = cell_below(topo, right, face);

  const auto expect = [&](int got, int index) {
    if (got != ids[index]) {
      throw Error(ErrorCode::UnsupportedTopology,
                  "inconsistent one-ring around face " + std::to_string(face));
    }
  };
  expect(topo.origin(top_left), 4);
  expect(topo.origin(T::next(top_left)), 3);
  expect(topo.origin(bottom_right), 2 * n);
  expect(topo.origin(T::prev(bottom_right)), 1);

  const int x = 2 * n + 1;
  ids[x + 0] = topo.origin(T::prev(top_left));
  ids[x + 1] = topo.origin(T::next(T::next(top_left)));
  ids[x + 2] = topo.origin(T::next(T::next(top)));
  ids[x + 3] = topo.origin(T::next(T::next(top_right)));
  ids[x + 4] = topo.origin(T::next(top_right));
  ids[x + 5] = topo.origin(T::next(right));
  ids[x + 6] = topo.origin(T::next(bottom_right));
  return ids;
}

std::pair<double, double> face_to_patch(int rotation, double xi, double eta) noexcept {
  switch (rotation & 3) {
    case 1: return {eta, 1.0 - xi};
    case 2: return {1.0 - xi, 1.0 - eta};
    case 3: return {1.0 - eta, xi};
    default: return {xi, eta};
  }
}

std::pair<double, double> patch_to_face(int rotation, double s, double t) noexcept {
  switch (rotation & 3) {
    case 1: return {1.0 - t, s};
    case 2: return {1.0 - s, 1.0 - t};
    case 3: return {t, 1.0 - s};
    default: return {s, t};
  }
}

std::vector<DofWeight> PatchedMesh::condensation(int v) const {
  if (!extended.is_ghost(v)) return {{v, 1.0}};
  const GhostRef& g = extended.ghost_of(v);
  return {{g.boundary, 2.0}, {g.interior, -1.0}};
}

PatchedMesh build_patches(const ControlMesh& input) {
  if (input.has_ghosts()) {
    throw Error(ErrorCode::UnsupportedTopology, "build patches from the real mesh");
  }
  check_isolation_input(input);
  ControlMesh mesh = input;
  int steps = 0;
  while (!isolated(mesh.topology())) {
    if (steps == 2) {
      throw Error(ErrorCode::IsolationFailed, "extraordinary vertices still share faces after two subdivisions");
    }
    mesh = subdivide_once(mesh);
    ++steps;
  }

  ControlMesh extended = with_ghost_ring(mesh);
  const Topology& topo = extended.topology();
  std::vector<Patch> patches(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    Patch& p = patches[f];
    p.face = f;
    int ev_corner = -1;
    for (int k = 0; k < 4; ++k) {
      const int v = topo.face(f)[k];
      if (topo.is_boundary(v)) {
        throw Error(ErrorCode::UnsupportedTopology,
                    "vertex " + std::to_string(v) + " stays on the boundary after the ghost ring");
      }
      if (topo.valence(v) != 4) ev_corner = k;
    }
    if (ev_corner < 0) {
      const auto ids = gather_regular(topo, f, 0);
      p.control_ids.assign(ids.begin(), ids.end());
    } else {
      p.kind = PatchKind::Irregular;
      p.rotation = ev_corner;
      p.ev_valence = topo.valence(topo.face(f)[ev_corner]);
      p.control_ids = gather_irregular(topo, f, ev_corner);
    }
  }
  return PatchedMesh{std::move(mesh), std::move(extended), std::move(patches), steps};
}

}  // namespace shellvib

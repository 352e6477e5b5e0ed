#pragma once

// Quad control meshes: topology, OBJ I/O, Catmull-Clark refinement, ghost
// rings for open surfaces, patch extraction, least-squares limit fitting and
// the benchmark geometries.

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

namespace shellvib {

using Vec3 = Eigen::Vector3d;
using Quad = std::array<int, 4>;

/// Half-edge view of a quad mesh. Half-edge `4*f + k` runs from corner k to
/// corner k+1 of face f, so next/prev are arithmetic and only twins are stored.
class Topology {
 public:
  Topology(int num_vertices, std::vector<Quad> faces);

  int num_vertices() const noexcept { return num_vertices_; }
  int num_faces() const noexcept { return static_cast<int>(faces_.size()); }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  int num_halfedges() const noexcept { return 4 * num_faces(); }

  const Quad& face(int f) const { return faces_[f]; }
  const std::vector<Quad>& faces() const noexcept { return faces_; }

  static int next(int h) noexcept { return 4 * (h / 4) + (h % 4 + 1) % 4; }
  static int prev(int h) noexcept { return 4 * (h / 4) + (h % 4 + 3) % 4; }
  static int face_of(int h) noexcept { return h / 4; }

  int origin(int h) const { return faces_[h / 4][h % 4]; }
  int dest(int h) const { return origin(next(h)); }
  /// -1 on a boundary edge.
  int twin(int h) const { return twin_[h]; }

  int edge_of(int h) const { return edge_of_[h]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  bool is_boundary_edge(int e) const { return twin_[edge_halfedge_[e]] < 0; }
  int edge_halfedge(int e) const { return edge_halfedge_[e]; }

  int valence(int v) const { return valence_[v]; }
  bool is_boundary(int v) const { return boundary_[v]; }
  bool is_extraordinary(int v) const { return !boundary_[v] && valence_[v] != 4; }

  /// Outgoing half-edges of v in counter-clockwise order. For boundary
  /// vertices the fan starts at the outgoing boundary half-edge.
  const std::vector<int>& fan(int v) const { return fans_[v]; }

  bool closed() const noexcept { return num_boundary_edges_ == 0; }
  int num_boundary_edges() const noexcept { return num_boundary_edges_; }

 private:
  int num_vertices_;
  std::vector<Quad> faces_;
  std::vector<int> twin_;
  std::vector<int> edge_of_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> edge_halfedge_;
  std::vector<int> valence_;
  std::vector<bool> boundary_;
  std::vector<std::vector<int>> fans_;
  int num_boundary_edges_ = 0;
};

/// A ghost vertex mirrors `interior` through `boundary`:
/// P_ghost = 2 P_boundary - P_interior.
struct GhostRef {
  int boundary;
  int interior;
};

/// Control polygon. Immutable once built; topology is shared between meshes
/// that differ only in vertex positions. Ghost vertices and faces, when
/// present, are stored after the real ones.
class ControlMesh {
 public:
  ControlMesh(std::vector<Vec3> vertices, std::vector<Quad> faces);
  ControlMesh(std::shared_ptr<const Topology> topology, std::vector<Vec3> vertices,
              std::vector<GhostRef> ghosts = {}, int num_real_faces = -1);

  const Topology& topology() const noexcept { return *topology_; }
  std::shared_ptr<const Topology> shared_topology() const noexcept { return topology_; }

  std::span<const Vec3> positions() const noexcept { return vertices_; }
  const Vec3& position(int v) const { return vertices_[v]; }
  std::span<const Vec3> real_positions() const noexcept {
    return std::span<const Vec3>(vertices_).first(num_real_vertices());
  }

  int num_vertices() const noexcept { return topology_->num_vertices(); }
  int num_faces() const noexcept { return topology_->num_faces(); }
  int num_real_vertices() const noexcept {
    return num_vertices() - static_cast<int>(ghosts_.size());
  }
  int num_real_faces() const noexcept { return num_real_faces_; }

  bool has_ghosts() const noexcept { return !ghosts_.empty(); }
  const std::vector<GhostRef>& ghosts() const noexcept { return ghosts_; }
  bool is_ghost(int v) const noexcept { return v >= num_real_vertices(); }
  const GhostRef& ghost_of(int v) const { return ghosts_[v - num_real_vertices()]; }

  /// Same topology with new real vertex positions; ghost positions are
  /// regenerated from their reflection relation.
  ControlMesh with_real_positions(std::vector<Vec3> real) const;

  /// Interior vertices of valence other than 4 (real vertices only).
  int extraordinary_vertex_count() const;

 private:
  std::shared_ptr<const Topology> topology_;
  std::vector<Vec3> vertices_;
  std::vector<GhostRef> ghosts_;
  int num_real_faces_;
};

// ---------------------------------------------------------------------------
// OBJ subset: `v x y z`, `f i j k l` (1-based), `#` comments.

ControlMesh parse_obj(std::istream& in);
ControlMesh load_obj(const std::filesystem::path& path);
/// Writes real vertices and faces only.
void write_obj(const ControlMesh& mesh, std::ostream& out);
void write_obj(const ControlMesh& mesh, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Catmull-Clark refinement.

/// One refinement step expressed as a linear stencil. New vertices are
/// ordered [vertex points | edge points | face points]; new face 4f+k sits at
/// corner k of old face f and starts at that corner's vertex point.
struct SubdivisionStep {
  int num_vertices = 0;
  std::vector<Quad> faces;
  Eigen::SparseMatrix<double, Eigen::RowMajor> stencil;
  /// True for new vertices produced by a boundary (curve) rule.
  std::vector<bool> boundary_rule;
};

SubdivisionStep subdivision_step(const Topology& topology);
ControlMesh subdivide_once(const ControlMesh& mesh);

/// Appends one ring of reflected ghost vertices and faces around every
/// boundary. Closed meshes are returned unchanged.
ControlMesh with_ghost_ring(const ControlMesh& mesh);

// ---------------------------------------------------------------------------
// Patches.

enum class PatchKind { Regular, Irregular };

/// Element support. Patch parameters (s, t) start at face corner `rotation`;
/// for irregular patches that corner is the extraordinary vertex.
///
/// Irregular ordering: 0 is the extraordinary vertex; 2k+1 and 2k+2 are the
/// edge and diagonal neighbours of the k-th face counter-clockwise around it
/// (face 0 is the element); the last seven run over the far side of the
/// element, grid positions (0,3) (1,3) (2,3) (3,3) (3,2) (3,1) (3,0) of the
/// equivalent 4x4 layout.
struct Patch {
  int face = -1;
  PatchKind kind = PatchKind::Regular;
  int rotation = 0;
  int ev_valence = 4;
  std::vector<int> control_ids;
};

/// Row-major 4x4 grid (index i + 4 j, i along s); the element is the centre
/// cell. Throws UnsupportedTopology if a corner of the face is irregular.
std::array<int, 16> gather_regular(const Topology& topology, int face, int rotation);
/// 2n+8 control ids; corner `rotation` of the face must be the only
/// extraordinary corner.
std::vector<int> gather_irregular(const Topology& topology, int face, int rotation);

/// Map face-natural (xi, eta) (origin at corner 0) to patch coordinates and back.
std::pair<double, double> face_to_patch(int rotation, double xi, double eta) noexcept;
std::pair<double, double> patch_to_face(int rotation, double s, double t) noexcept;

struct DofWeight {
  int vertex;
  double weight;
};

/// Analysis-ready mesh: the (possibly refined) real mesh, its extension with
/// ghosts, one patch per real face, and the condensation of each extended
/// vertex onto real vertices.
struct PatchedMesh {
  ControlMesh mesh;
  ControlMesh extended;
  std::vector<Patch> patches;
  int isolation_steps = 0;

  /// Real vertices and weights that define extended vertex v.
  std::vector<DofWeight> condensation(int v) const;
};

PatchedMesh build_patches(const ControlMesh& mesh);

// ---------------------------------------------------------------------------
// Least-squares fitting of the limit surface.

struct SurfaceSample {
  int face;
  double xi;
  double eta;
  /// Limit point of the mesh being fitted at this sample.
  Vec3 current;
};

using SurfaceSampler = std::function<Vec3(const SurfaceSample&)>;

struct FitReport {
  double rms_residual = 0.0;
  double max_residual = 0.0;
  int samples = 0;
};

/// Sampling operator and factorised normal equations for repeated fits on
/// one topology. Samples sit at ((i + 1/2)/4, (j + 1/2)/4) of every face.
class LimitSurfaceFitter {
 public:
  /// Throws FitSingular when some control point influences no sample or the
  /// normal equations cannot be factorised.
  explicit LimitSurfaceFitter(const ControlMesh& mesh);
  ~LimitSurfaceFitter();
  LimitSurfaceFitter(const LimitSurfaceFitter&) = delete;
  LimitSurfaceFitter& operator=(const LimitSurfaceFitter&) = delete;

  const PatchedMesh& patched() const noexcept;
  int num_samples() const noexcept;

  /// Limit points of `current` at every sample, in sample order.
  std::vector<Vec3> sample(const ControlMesh& current) const;
  /// `current` must share the fitter's (isolated) topology.
  ControlMesh fit(const ControlMesh& current, const SurfaceSampler& target,
                  FitReport* report = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Moves the real control points so that the limit surface, sampled on a
/// 4x4 grid per face, best matches `target` in the least-squares sense.
/// Meshes that need isolation are refined first.
ControlMesh fit_limit_surface(const ControlMesh& mesh, const SurfaceSampler& target,
                              FitReport* report = nullptr);

// ---------------------------------------------------------------------------
// Benchmark geometries.

struct SphereSpec {
  double radius;
  int level;
};

/// Cylindrical roof with its axis along y. `theta` is the half opening angle
/// in radians; the grid has n x n faces.
struct RoofSpec {
  double length;
  double radius;
  double theta;
  int n;
};

using BenchmarkSpec = std::variant<SphereSpec, RoofSpec>;

ControlMesh unit_cube_mesh();
ControlMesh generate_benchmark_mesh(const BenchmarkSpec& spec);

struct FacePoint {
  int face;
  double xi;
  double eta;
};

/// Midpoint of the free straight edge at +theta.
FacePoint roof_free_edge_midpoint(const RoofSpec& spec);

/// Limit-surface point for a (face, xi, eta) in face-natural coordinates.
Vec3 limit_point(const PatchedMesh& patched, const FacePoint& point);

}  // namespace shellvib

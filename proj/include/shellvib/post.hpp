#pragma once

// Batch front end: JSON run configuration, the mesh -> assembly -> solve
// pipeline, legacy VTK mode-shape export and CSV/JSON reports.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shellvib/error.hpp"
#include "shellvib/solver.hpp"

namespace shellvib {

struct ObjSource {
  std::filesystem::path path;
};

using MeshSource = std::variant<ObjSource, SphereSpec, RoofSpec>;

/// Displacement component of the limit surface at a point.
struct Probe {
  std::string name;
  FacePoint point;
  int component = 2;
};

struct ModalAnalysis {
  ModalOptions options;
};

struct StaticAnalysis {
  std::vector<Probe> probes;
};

struct OutputSpec {
  std::filesystem::path directory = ".";
  std::string name = "shellvib";
  bool vtk = true;
  /// Samples per element edge (n x n points per element).
  int sampling = 4;
  /// Modes written to the VTK file; 0 writes all of them.
  int vtk_modes = 0;
};

struct RunConfig {
  MeshSource mesh;
  double thickness = 0.0;
  MaterialSpec material;
  Electric electric;
  std::variant<ModalAnalysis, StaticAnalysis> analysis;
  std::vector<Constraint> constraints;
  Vec3 areal_load = Vec3::Zero();
  Vec3 body_force = Vec3::Zero();
  OutputSpec output;
  /// Normalised configuration with every default filled in; parsing it
  /// again yields the same RunConfig.
  nlohmann::json echo;
};

/// Throws ConfigError for unknown fields, missing fields, wrong types or
/// out-of-range values. Nothing is computed before validation succeeds.
RunConfig parse_config(const nlohmann::json& config);
RunConfig load_config(const std::filesystem::path& path);

struct MeshStats {
  int elements = 0;
  int vertices = 0;
  int extraordinary_vertices = 0;
  int irregular_elements = 0;
  int boundary_vertices = 0;
  int isolation_steps = 0;
  int displacement_dofs = 0;
  int free_dofs = 0;
  int potential_dofs = 0;
};

MeshStats mesh_stats(const PatchedMesh& mesh, const AssembledSystem& sys);

struct ProbeValue {
  std::string name;
  int component = 2;
  double value = 0.0;
};

struct RunOutcome {
  nlohmann::json config;
  MeshStats stats;
  std::optional<ModalResult> modal;
  std::optional<StaticResult> statics;
  std::vector<ProbeValue> probes;
  std::vector<std::filesystem::path> files;
};

/// Builds and solves the model. Artifacts are written only when `write` is
/// set.
RunOutcome run(const RunConfig& config, bool write = true);

/// Full-length nodal fields over the real vertices of the analysis mesh.
struct NodalField {
  std::string name;
  Eigen::VectorXd displacement;
  Eigen::VectorXd psi;
  Eigen::VectorXd phi;
};

/// Legacy ASCII unstructured grid: n x n limit-surface samples per element,
/// (n-1)^2 quads per element; per field the displacement vector, |u| and the
/// potentials when present.
void write_vtk(std::ostream& out, const PatchedMesh& mesh, const std::vector<NodalField>& fields, int sampling,
               const std::string& title = "shellvib");
void export_vtk(const std::filesystem::path& path, const PatchedMesh& mesh, const std::vector<NodalField>& fields,
                int sampling, const std::string& title = "shellvib");

/// mode_index, frequency_hz, rigid_flag, residual.
void write_modal_csv(std::ostream& out, const ModalResult& result);
/// probe, component, value.
void write_probe_csv(std::ostream& out, const std::vector<ProbeValue>& probes);
nlohmann::json report_json(const RunOutcome& outcome);
/// Writes <name>.csv and <name>.json and returns their paths.
std::vector<std::filesystem::path> export_report(const RunOutcome& outcome, const std::filesystem::path& directory,
                                                 const std::string& name);

/// Machine-readable error object printed by the CLI.
nlohmann::json error_json(const Error& error);
/// 2 for configuration errors, 1 otherwise.
int exit_code(ErrorCode code) noexcept;

}  // namespace shellvib

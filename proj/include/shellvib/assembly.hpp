#pragma once

// Quadrature, element matrices and global assembly of the coupled
// electromechanical shell system.

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "shellvib/material.hpp"
#include "shellvib/mesh.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

using SpMat = Eigen::SparseMatrix<double>;

enum class ElectricCondition { Elastic, Unelectroded, ShortCircuited, Electroded };

struct Electric {
  ElectricCondition condition = ElectricCondition::Elastic;
  /// Half the electrode voltage difference, used by Electroded only.
  double voltage = 0.0;

  bool has_psi() const noexcept { return condition == ElectricCondition::Unelectroded; }
  bool has_phi() const noexcept { return condition != ElectricCondition::Elastic; }
};

struct SelectAll {};
struct SelectBoundary {};
struct SelectIds {
  std::vector<int> ids;
};
/// Vertices with |n.x - offset| <= tolerance, optionally boundary vertices only.
struct SelectPlane {
  Vec3 normal;
  double offset = 0.0;
  double tolerance = 1e-9;
  bool boundary_only = false;
};
/// The `count` vertices closest to `point`.
struct SelectNearest {
  Vec3 point;
  int count = 1;
};
using VertexSelector = std::variant<SelectAll, SelectBoundary, SelectIds, SelectPlane, SelectNearest>;

struct Constraint {
  VertexSelector selector;
  std::array<bool, 3> fix{true, true, true};
};

/// Real vertices picked by a selector, sorted. Throws BadConstraint for ids
/// outside the mesh or an empty selection.
std::vector<int> select_vertices(const ControlMesh& mesh, const VertexSelector& selector);

struct ShellModel {
  PatchedMesh mesh;
  double thickness = 0.0;
  MaterialSpec material;
  Electric electric;
  std::vector<Constraint> constraints;
  Vec3 areal_load = Vec3::Zero();
  Vec3 body_force = Vec3::Zero();

  int num_vertices() const noexcept { return mesh.mesh.num_vertices(); }
  void validate() const;
};

struct QuadraturePoint {
  double s;
  double t;
  double weight;
};

/// Ring depth of the rule used on irregular patches.
inline constexpr int kIrregularRingDepth = 4;

std::vector<QuadraturePoint> quadrature_rule(PatchKind kind, int ring_depth = kIrregularRingDepth);
std::vector<QuadraturePoint> quadrature_rule(const Patch& patch);

/// Element blocks in local numbering: control point a owns displacement
/// rows 3a..3a+2 and potential row a. Absent blocks are empty.
struct ElementMatrices {
  Eigen::MatrixXd M;
  Eigen::MatrixXd K;
  Eigen::MatrixXd Cpsi;
  Eigen::MatrixXd Cphi;
  Eigen::MatrixXd D1;
  Eigen::MatrixXd D2;
  Eigen::VectorXd f;
  Eigen::VectorXd fV;
};

ElementMatrices element_matrices(const Patch& patch, const ShellModel& model);

/// Global blocks over real vertices: displacement dof 3v+i, potential dof v.
/// After `apply_constraints` the displacement blocks hold free dofs only and
/// `free_dofs` maps them back.
struct AssembledSystem {
  int num_vertices = 0;
  Electric electric;
  SpMat M;
  SpMat K;
  SpMat Cpsi;
  SpMat Cphi;
  SpMat D1;
  SpMat D2;
  Eigen::VectorXd f;
  Eigen::VectorXd fV;
  std::vector<int> free_dofs;
  bool constrained = false;

  int num_displacement_dofs() const noexcept { return static_cast<int>(K.rows()); }
  /// Expands a free-dof vector to all 3V displacement dofs (zeros elsewhere).
  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;
};

/// Element blocks are computed in parallel and scattered in element order,
/// so the result does not depend on the thread count.
AssembledSystem assemble_system(const ShellModel& model);
AssembledSystem assemble_system_serial(const ShellModel& model);

AssembledSystem apply_constraints(const AssembledSystem& sys, const ShellModel& model);

/// Six rigid-body displacement fields (3 translations, 3 rotations about the
/// centroid) over the real control points.
std::array<Eigen::VectorXd, 6> rigid_body_fields(const ControlMesh& mesh);

}  // namespace shellvib

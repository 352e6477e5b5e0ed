#pragma once

// Catmull-Clark limit-surface basis functions and their parametric
// derivatives ("jets") on regular and irregular patches.

#include <array>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "shellvib/mesh.hpp"

namespace shellvib {

/// Uniform cubic B-spline segment: values, first and second derivatives of
/// the four basis functions at t.
struct Jet1d {
  std::array<double, 4> value;
  std::array<double, 4> d1;
  std::array<double, 4> d2;
};

Jet1d bspline_jet_1d(double t);

enum class JetOrder { Value = 0, First = 1, Second = 2 };

/// Basis functions of one patch at (s, t) in patch coordinates. Derivative
/// vectors are empty when not requested.
struct BasisJet {
  double s = 0.0;
  double t = 0.0;
  Eigen::VectorXd N;
  Eigen::VectorXd N1;
  Eigen::VectorXd N2;
  Eigen::VectorXd N11;
  Eigen::VectorXd N12;
  Eigen::VectorXd N22;

  int size() const noexcept { return static_cast<int>(N.size()); }
};

struct SurfaceJet {
  Vec3 x = Vec3::Zero();
  Vec3 a1 = Vec3::Zero();
  Vec3 a2 = Vec3::Zero();
  Vec3 a11 = Vec3::Zero();
  Vec3 a12 = Vec3::Zero();
  Vec3 a22 = Vec3::Zero();
};

/// 16 tensor-product functions, index i + 4 j.
BasisJet regular_basis_jet(double s, double t, JetOrder order = JetOrder::Second);

/// 2n+8 functions in the irregular ordering of `Patch`. At the extraordinary
/// corner only values are available.
BasisJet irregular_basis_jet(int valence, double s, double t, JetOrder order = JetOrder::Second);

BasisJet patch_basis_jet(const Patch& patch, double s, double t, JetOrder order = JetOrder::Second);

/// Contraction of a basis jet with the patch's control points.
SurfaceJet surface_jet(const BasisJet& basis, const Patch& patch, std::span<const Vec3> positions);

std::pair<BasisJet, SurfaceJet> eval_patch_jet(const Patch& patch, std::span<const Vec3> positions,
                                               double s, double t,
                                               JetOrder order = JetOrder::Second);

/// Local refinement operators for valence n in the irregular ordering.
struct IrregularTables {
  int valence = 0;
  /// Control net of the sub-patch at the extraordinary corner.
  Eigen::MatrixXd corner;
  /// 4x4 grids of the three regular sub-patches, aligned with (s, t):
  /// [0] s >= 1/2, t < 1/2; [1] s, t >= 1/2; [2] s < 1/2, t >= 1/2.
  std::array<Eigen::MatrixXd, 3> pick;
  /// Limit position weights at the extraordinary vertex.
  Eigen::VectorXd limit_mask;
};

/// Built once per valence and cached; thread-safe.
const IrregularTables& irregular_tables(int valence);

/// Faces of the local (n+5)-face control net in the irregular ordering.
std::vector<Quad> irregular_local_faces(int valence);

}  // namespace shellvib
